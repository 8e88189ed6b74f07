"""Executable acceptance criteria.

Each criterion is a function returning (ok, detail); run_all wraps them
with timing.  The same functions back `skewlrc selftest` and the
acceptance test module, so a criterion can never drift between the two.
All randomness is locally seeded; every run checks identical instances.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .dss import DssState, RepairSet, local_polynomials, run_all_repairs
from .galois import ExtField
from .mrlrc import (MrLrcParams, mrlrc_encode, mrlrc_setup,
                    is_maximally_recoverable, systematic_mds_generator)
from .scenario import Scenario, sweep_rows
from .secrecy import (assemble_observation, e_vector, eavesdropped_dim_direct,
                      eavesdropped_dim_forwarded, eavesdropped_dimension,
                      entropy_rank_check, make_spec, mi_oracle,
                      secrecy_dim_direct, secrecy_dim_forwarded,
                      staged_reduction, verify_observation)
from .skew import SkewPoly, rank

_SHAPES: dict[tuple, MrLrcParams] = {}


def shape(q, m, g, r, delta, k) -> MrLrcParams:
    key = (q, m, g, r, delta, k)
    if key not in _SHAPES:
        _SHAPES[key] = mrlrc_setup(ExtField(q, m), g, r, delta, k)
    return _SHAPES[key]


def _random_poly(params, rng) -> SkewPoly:
    F = params.field
    return SkewPoly.make(F, [F.random_element(rng) for _ in range(params.k)])


def _simulate(params, failures, scheme, flist=None, policy="default",
              observed=frozenset(), seed=0):
    rng = random.Random(seed)
    cw = mrlrc_encode(params, _random_poly(params, rng))
    state = DssState(params, cw)
    state.fail_nodes(failures)
    rounds = run_all_repairs(state, scheme, flist=flist, policy=policy,
                             observed=observed)
    glob = [r for r in rounds if r.scheme in ("naive", "direct", "forwarded")]
    return state, glob


# ---------------------------------------------------------------------------
# criterion 1: running-example reproduction
# ---------------------------------------------------------------------------

EXAMPLE_FAILURES = ((1, 0), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 0), (3, 4))


def crit_example_reproduction():
    params = shape(5, 3, 3, 3, 3, 7)
    # direct: eavesdropper owns the repairing group plus one outside node
    spec_d = make_spec(params, [(2, 0)], [1])
    state, glob = _simulate(params, EXAMPLE_FAILURES, "direct", seed=1)
    assert len(glob) == 1
    obs = assemble_observation(params, spec_d, glob[0])
    ke_d = eavesdropped_dimension(params.field, obs)
    e_d = e_vector(spec_d, params)
    ks_d = secrecy_dim_direct(params.g, params.r, params.h, params.k,
                              spec_d.l1, spec_d.l2, e_d)
    # forwarded: eavesdropper owns the last group before the target in the
    # forwarding order, plus the same outside node
    spec_f = make_spec(params, [(2, 0)], [3])
    state, glob = _simulate(params, EXAMPLE_FAILURES, "forwarded",
                            flist=(2, 3, 1), seed=1)
    obs = assemble_observation(params, spec_f, glob[0])
    ke_f = eavesdropped_dimension(params.field, obs)
    e_f = e_vector(spec_f, params)
    ks_f = secrecy_dim_forwarded(params.g, params.r, params.h, params.k,
                                 spec_f.l1, spec_f.l2, glob[0].flist,
                                 spec_f.l2_groups, e_f)
    ok = (ks_d, ks_f, ke_d, ke_f) == (1, 1, 6, 6)
    return ok, (f"direct k_s={ks_d} oracle k_e={ke_d}; "
                f"forwarded k_s={ks_f} oracle k_e={ke_f} (want 1/6 both)")


# ---------------------------------------------------------------------------
# criterion 2: secrecy-vs-groups sweep series
# ---------------------------------------------------------------------------

SWEEP_DIRECT = tuple(4 * (g - 1) for g in range(1, 16))
SWEEP_FORWARDED = (0, 4, 8, 15, 22, 29, 36, 43, 50, 57, 64, 71, 78, 85, 92)
SWEEP_LRC = tuple(7 * (g - 1) for g in range(1, 16))


def sweep_base_scenario() -> Scenario:
    return Scenario(q=17, m=7, modulus=None, g=3, r=7, delta=2, k=18, k_e=0,
                    failures=(), scheme="forwarded", flist=None,
                    policy="default", l1=0, l2=1, placement="worst-case",
                    seed=0)


def crit_sweep_series():
    rows = sweep_rows(sweep_base_scenario(), 1, 15)
    direct = tuple(r["ks_direct"] for r in rows)
    fwd = tuple(r["ks_forwarded"] for r in rows)
    lrc = tuple(r["ks_lrc_no_global"] for r in rows)
    ok = (direct, fwd, lrc) == (SWEEP_DIRECT, SWEEP_FORWARDED, SWEEP_LRC)
    bad = []
    if direct != SWEEP_DIRECT:
        bad.append(f"direct {direct}")
    if fwd != SWEEP_FORWARDED:
        bad.append(f"forwarded {fwd}")
    if lrc != SWEEP_LRC:
        bad.append(f"lrc {lrc}")
    return ok, ("all 45 swept values match" if ok else "; ".join(bad))


# ---------------------------------------------------------------------------
# criterion 3: worked observation-matrix reduction
# ---------------------------------------------------------------------------

def crit_worked_reduction():
    params = shape(5, 2, 3, 2, 2, 5)
    state, glob = _simulate(params, ((1, 0), (1, 2)), "direct", seed=2)
    spec = make_spec(params, [(2, 0)], [1])
    obs = assemble_observation(params, spec, glob[0])
    stages = staged_reduction(params.field, obs, glob[0])
    shapes = [(name, len(rows), len(rows[0]) if rows else 0, rk)
              for name, rows, rk in stages]
    want = [("M", 6, 5, 4), ("M'", 5, 5, 4), ("M''", 5, 5, 4), ("M'''", 2, 3, 2)]
    ok = shapes == want
    return ok, f"stages {shapes} (want {want}; rank 4 = 2 units + residual 2)"


# ---------------------------------------------------------------------------
# criterion 4: local polynomials decompose the message polynomial
# ---------------------------------------------------------------------------

def crit_repair_decomposition():
    params = shape(5, 3, 3, 3, 3, 7)
    F = params.field
    rng = random.Random(4)
    counts_pool = ((1, 3, 3), (3, 1, 3), (3, 3, 1), (2, 2, 3), (2, 3, 2), (3, 2, 2))
    trials = 200
    for _ in range(trials):
        f = _random_poly(params, rng)
        cw = mrlrc_encode(params, f)
        state = DssState(params, cw)
        counts = counts_pool[rng.randrange(len(counts_pool))]
        positions = []
        for i in range(1, params.g + 1):
            js = rng.sample(range(params.group_size), counts[i - 1])
            positions += [(i, j) for j in sorted(js)]
        rs = RepairSet(tuple(sorted(positions)))
        polys = local_polynomials(state, rs)
        total = SkewPoly.zero(F)
        for p in polys.values():
            total = total + p
        if total.coeffs != f.coeffs:
            return False, f"sum of local polynomials != f on repair set {rs.positions}"
    return True, f"{trials} random (codeword, repair set) decompositions exact"


# ---------------------------------------------------------------------------
# criterion 5: maximal recoverability, exhaustive
# ---------------------------------------------------------------------------

def crit_max_recoverability():
    small = shape(5, 2, 2, 2, 2, 3)
    medium = shape(7, 3, 3, 3, 2, 7)
    ok_small = is_maximally_recoverable(small)
    ok_medium = is_maximally_recoverable(medium)
    # a local generator with two equal columns cannot survive every
    # single-erasure pattern
    F = small.field
    good = systematic_mds_generator(F.q, 2, 3)
    corrupt = ((1, 0, 1), (0, 1, 0))
    bad_params = mrlrc_setup(F, 2, 2, 2, 3, local_generators=(corrupt, good))
    ok_bad = not is_maximally_recoverable(bad_params)
    ok = ok_small and ok_medium and ok_bad
    return ok, (f"small MR={ok_small}, medium MR={ok_medium}, "
                f"corrupted generator rejected={ok_bad}")


# ---------------------------------------------------------------------------
# criterion 6: exact secrecy via mutual information
# ---------------------------------------------------------------------------

def crit_secrecy_oracle():
    params = shape(5, 1, 4, 1, 2, 3)
    spec = make_spec(params, [], [2])
    failures = ((1, 0), (1, 1))
    sealed = mi_oracle(params, 2, spec, failures, "forwarded", flist=(3, 4, 2, 1))
    leaky = mi_oracle(params, 0, spec, failures, "forwarded", flist=(3, 4, 2, 1))
    ok = (sealed["I"] == 0 and sealed["pad_covers_observations"]
          and sealed["pad_determined"] and leaky["I"] > 0)
    return ok, (f"padded I={sealed['I']} (H_E={sealed['H_E']}, "
                f"covered={sealed['pad_covers_observations']}, "
                f"determined={sealed['pad_determined']}); "
                f"unpadded I={leaky['I']} over {sealed['messages_enumerated']} messages")


# ---------------------------------------------------------------------------
# criterion 7: entropy of a linear image equals its rank
# ---------------------------------------------------------------------------

def crit_entropy_rank():
    F = ExtField(3, 1)
    rng = random.Random(7)
    trials = 50
    for _ in range(trials):
        cols = rng.randrange(1, 5)
        nrows = rng.randrange(0, 6)
        M = [[rng.randrange(3) for _ in range(cols)] for _ in range(nrows)]
        ent, rk = entropy_rank_check(F, M)
        if ent != rk:
            return False, f"entropy {ent} != rank {rk} for {M}"
    return True, f"{trials} random matrices: exact entropy equals rank"


# ---------------------------------------------------------------------------
# criterion 8: closed forms bound the rank oracle, tight adversarially
# ---------------------------------------------------------------------------

def _formula_for(params, spec, rnd, clamp=False):
    e = e_vector(spec, params)
    if rnd.scheme == "direct":
        return eavesdropped_dim_direct(params.g, params.r, params.h, params.k,
                                       spec.l1, spec.l2, e, clamp=clamp)
    return eavesdropped_dim_forwarded(params.g, params.r, params.h, params.k,
                                      spec.l1, spec.l2, rnd.flist or (),
                                      spec.l2_groups, e, clamp=clamp)


def random_admissible_instance(rng):
    """One in-hypothesis scenario with a single global repair round."""
    params = shape(5, 3, 3, 3, 3, 7) if rng.random() < 0.5 \
        else shape(7, 3, 3, 3, 2, 7)
    g, r, delta, h, k = params.g, params.r, params.delta, params.h, params.k
    while True:
        target = rng.randrange(1, g + 1)
        extra = rng.randrange(1, min(h, params.group_size - (delta - 1)) + 1)
        tjs = rng.sample(range(params.group_size), delta - 1 + extra)
        failures = [(target, j) for j in sorted(tjs)]
        for i in range(1, g + 1):
            if i == target:
                continue
            cnt = rng.randrange(0, delta)
            failures += [(i, j) for j in sorted(rng.sample(range(params.group_size), cnt))]
        scheme = rng.choice(("direct", "forwarded"))
        l2 = tuple(sorted(rng.sample(range(1, g + 1), rng.randrange(0, 3))))
        if len(l2) * r >= k:
            continue
        intact = [p for p in params.positions() if p not in set(failures)]
        max_l1 = min(3, k - len(l2) * r - 1, len(intact))
        l1 = tuple(sorted(rng.sample(intact, rng.randrange(0, max_l1 + 1))))
        spec = make_spec(params, l1, l2)
        if spec.l1 + spec.l2 * r >= k:
            continue
        flist = None
        if scheme == "forwarded" and rng.random() < 0.5:
            order = [i for i in range(1, g + 1) if i != target]
            rng.shuffle(order)
            flist = tuple(order) + (target,)
        policy = rng.choice(("default", "adversarial"))
        return params, spec, tuple(failures), scheme, flist, policy


def adversarial_instance(idx: int):
    """Placement engineered so the closed form is met with equality."""
    params = shape(5, 3, 3, 3, 3, 7)
    g, r, delta, h = params.g, params.r, params.delta, params.h
    rng = random.Random(1000 + idx)
    scheme = "direct" if idx % 2 == 0 else "forwarded"
    target = 1 + idx % g
    failures = tuple((target, j) for j in range(delta - 1 + h))
    others = [i for i in range(1, g + 1) if i != target]
    if scheme == "direct":
        l2 = (target,)
        unobserved = others
        flist = None
    else:
        observed = others[(idx // 2) % len(others)]
        l2 = (observed,)
        unobserved = [i for i in others if i != observed]
        order = others[:]
        rng.shuffle(order)
        flist = tuple(order) + (target,)
    pool = [(i, j) for i in unobserved for j in range(r)]
    l1 = tuple(sorted(rng.sample(pool, idx % 3)))
    spec = make_spec(params, l1, l2)
    return params, spec, failures, scheme, flist, "adversarial"


def _run_instance(params, spec, failures, scheme, flist, policy, seed):
    observed = frozenset(spec.static_positions(params))
    state, glob = _simulate(params, failures, scheme, flist=flist,
                            policy=policy, observed=observed, seed=seed)
    assert len(glob) == 1, "instance generators must yield one global round"
    rnd = glob[0]
    obs = assemble_observation(params, spec, rnd)
    oracle = eavesdropped_dimension(params.field, obs)
    passed, total = verify_observation(params, spec, obs, rnd, state.truth)
    assert passed == total, f"observation model mismatch: {passed}/{total}"
    return oracle, _formula_for(params, spec, rnd)


def crit_formula_vs_oracle():
    rng = random.Random(8)
    for t in range(100):
        inst = random_admissible_instance(rng)
        oracle, formula = _run_instance(*inst, seed=t)
        if oracle > formula:
            return False, (f"random instance {t}: oracle {oracle} exceeds "
                           f"formula {formula} ({inst[3]}, failures {inst[2]})")
    misses = []
    for t in range(50):
        inst = adversarial_instance(t)
        oracle, formula = _run_instance(*inst, seed=500 + t)
        if oracle != formula:
            misses.append((t, oracle, formula))
    if misses:
        return False, f"adversarial equality missed on {misses}"
    return True, ("100 random instances bounded, 50 adversarial instances "
                  "met with equality")


# ---------------------------------------------------------------------------
# criterion 9: the three repair schemes agree with ground truth
# ---------------------------------------------------------------------------

def random_within_budget_failures(params, rng):
    """Failure pattern with total global need in [1, h]."""
    g, delta, h = params.g, params.delta, params.h
    while True:
        failures = []
        need = 0
        for i in range(1, g + 1):
            cnt = rng.randrange(0, params.group_size + 1)
            need += max(0, cnt - (delta - 1))
            failures += [(i, j) for j in sorted(rng.sample(range(params.group_size), cnt))]
        if 0 < need <= h and len(failures) < params.big_n:
            return tuple(failures)


def crit_repair_equivalence():
    params = shape(5, 3, 3, 3, 3, 7)
    rng = random.Random(9)
    trials = 200
    for t in range(trials):
        failures = random_within_budget_failures(params, rng)
        f = _random_poly(params, rng)
        cw = mrlrc_encode(params, f)
        finals = []
        for scheme in ("naive", "direct", "forwarded"):
            state = DssState(params, cw)
            state.fail_nodes(failures)
            run_all_repairs(state, scheme)
            if tuple(state.values) != cw.values:
                return False, f"{scheme} repair diverged on {failures}"
            finals.append(tuple(state.values))
        if len(set(finals)) != 1:
            return False, f"schemes disagree on {failures}"
    return True, f"{trials} random within-budget patterns repaired identically"


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriterionResult:
    name: str
    ok: bool
    detail: str
    seconds: float
    budget: float


CRITERIA = (
    ("example-reproduction", crit_example_reproduction, 5.0),
    ("sweep-series", crit_sweep_series, 10.0),
    ("worked-reduction", crit_worked_reduction, 5.0),
    ("repair-decomposition", crit_repair_decomposition, 30.0),
    ("max-recoverability", crit_max_recoverability, 60.0),
    ("secrecy-oracle", crit_secrecy_oracle, 60.0),
    ("entropy-rank", crit_entropy_rank, 30.0),
    ("formula-vs-oracle", crit_formula_vs_oracle, 120.0),
    ("repair-equivalence", crit_repair_equivalence, 60.0),
)


def run_all(only=None) -> list[CriterionResult]:
    results = []
    for name, fn, budget in CRITERIA:
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed criterion, not a crash
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        if ok and dt > budget:
            ok = False
            detail += f"; exceeded {budget:.0f}s budget"
        results.append(CriterionResult(name, ok, detail, dt, budget))
    return results
