"""What an eavesdropper learns, three ways: observation matrices with an
exact rank oracle, closed-form dimension formulas, and exhaustive
entropy / mutual-information checks on enumerable instances.

The eavesdropper reads l1 individual nodes and everything about l2
whole groups: their storage and all repair traffic INTO their CPUs.
Observations are linear in the message, so they are rows over the basis
c = (f(b~_mu))_{mu in repair set}:

- a fully observed group contributes rows for its first r node
  positions (every other in-group value is an F_q-combination of those,
  so the row space is unchanged; a test pins that),
- each extra node contributes one row (unit vector when the node sits
  in the repair set),
- each symbol arriving at an observed CPU during a global repair round
  contributes one row (for the forwarded scheme that row is the running
  aggregate, i.e. the sum of all upstream contributions).

The secrecy dimension is k minus the rank of the stack.  The closed
forms bound that rank from above for any admissible single-target
scenario and meet it on worst-case placements.

Analysis requires l1 nodes to stay intact through the scenario: the
model reads them as static storage, and a read of a later-failed node
would carry information the closed forms do not account for.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstraintError
from .galois import ExtField
from .mrlrc import MrLrcParams, mrlrc_encode, phi_global, secure_message
from .skew import (SkewPoly, expansion_row, lagrange_coefficient_matrix,
                   mat_inv, mat_mul, rank, row_dot, sigma_vandermonde)

Position = tuple[int, int]


@dataclass(frozen=True)
class EavesdropperSpec:
    l1_nodes: tuple[Position, ...]   # individually read nodes
    l2_groups: tuple[int, ...]       # fully observed groups (storage + inbound traffic)

    @property
    def l1(self) -> int:
        return len(self.l1_nodes)

    @property
    def l2(self) -> int:
        return len(self.l2_groups)

    def static_positions(self, params: MrLrcParams) -> set[Position]:
        out = set(self.l1_nodes)
        for i in self.l2_groups:
            out.update((i, j) for j in range(params.group_size))
        return out


def make_spec(params: MrLrcParams, l1_nodes, l2_groups) -> EavesdropperSpec:
    l1_nodes = tuple(sorted(set(tuple(p) for p in l1_nodes)))
    l2_groups = tuple(sorted(set(l2_groups)))
    for i, j in l1_nodes:
        if not (1 <= i <= params.g and 0 <= j < params.group_size):
            raise ConstraintError(f"eavesdropped node {(i, j)} out of range")
    for i in l2_groups:
        if not (1 <= i <= params.g):
            raise ConstraintError(f"eavesdropped group {i} out of range")
    spec = EavesdropperSpec(l1_nodes, l2_groups)
    if spec.l1 + spec.l2 * params.r >= params.k:
        raise ConstraintError(
            f"need l1 + l2*r < k: {spec.l1} + {spec.l2}*{params.r} >= {params.k}")
    return spec


def e_vector(spec: EavesdropperSpec, params: MrLrcParams) -> list[int]:
    """e_i = min(r, distinct observed node positions in group i)."""
    seen: dict[int, set[int]] = {i: set() for i in range(1, params.g + 1)}
    for i, j in spec.l1_nodes:
        seen[i].add(j)
    for i in spec.l2_groups:
        seen[i].update(range(params.group_size))
    return [min(params.r, len(seen[i])) for i in range(1, params.g + 1)]


# ---------------------------------------------------------------------------
# observation matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoundInfo:
    scheme: str
    target: int
    repair_set: tuple[Position, ...]
    flist: tuple[int, ...] | None
    global_positions: tuple[Position, ...]


def round_info(rnd) -> RoundInfo:
    """Adapter from a live RepairRound or a parsed transcript dict."""
    if isinstance(rnd, RoundInfo):
        return rnd
    if isinstance(rnd, dict):
        return RoundInfo(rnd["scheme"], rnd["target"], tuple(rnd["repair_set"]),
                         rnd["flist"], tuple(rnd["globals"]))
    rs = tuple(rnd.repair_set.positions) if rnd.repair_set is not None else ()
    return RoundInfo(rnd.scheme, rnd.target, rs, rnd.flist, rnd.global_positions)


@dataclass(frozen=True)
class ObservationMatrix:
    basis: tuple[Position, ...]      # repair-set positions indexing the columns
    static_rows: tuple[tuple[int, ...], ...]
    static_labels: tuple[tuple, ...]
    repair_rows: tuple[tuple[int, ...], ...]
    repair_labels: tuple[tuple, ...]
    raw_static_count: int            # before dropping l1 nodes inside l2 groups

    def all_rows(self):
        return [list(r) for r in self.static_rows + self.repair_rows]


def _coeff_matrix(params: MrLrcParams, basis):
    locs = [params.ext_locator(i, j) for i, j in basis]
    return lagrange_coefficient_matrix(params.field, locs)


def _row_at(params, L, i, j):
    return expansion_row(params.field, L, params.ext_locator(i, j))


def _restrict(row, basis, group):
    return [v if basis[t][0] == group else 0 for t, v in enumerate(row)]


def static_view(params: MrLrcParams, spec: EavesdropperSpec, basis, L=None):
    """Rows for stored symbols the eavesdropper reads directly.

    Fully observed groups give their first r positions; l1 nodes one row
    each, deduplicated against observed groups.  Unit rows appear
    automatically whenever the node sits in the basis.
    """
    L = L if L is not None else _coeff_matrix(params, basis)
    rows, labels = [], []
    raw = spec.l1 + spec.l2 * params.r
    for i in spec.l2_groups:
        for j in range(params.r):
            rows.append(_row_at(params, L, i, j))
            labels.append(("l2", i, j))
    for i, j in spec.l1_nodes:
        if i in spec.l2_groups:
            continue
        rows.append(_row_at(params, L, i, j))
        labels.append(("l1", i, j))
    return rows, labels, raw


def repair_view_direct(params: MrLrcParams, spec: EavesdropperSpec, rnd, L=None):
    """Rows for symbols arriving at an observed target during direct repair.

    Invisible unless the target group is observed; then each contributing
    group ships one evaluation per failed locator, supported on that
    group's basis columns (the target's own term is its stored share,
    included for completeness; it is a combination of unit rows).
    """
    info = round_info(rnd)
    if info.target not in spec.l2_groups:
        return [], []
    basis = info.repair_set
    L = L if L is not None else _coeff_matrix(params, basis)
    groups = tuple(sorted({i for i, _ in basis}))
    rows, labels = [], []
    for (ti, tj) in info.global_positions:
        full = _row_at(params, L, ti, tj)
        for gi in groups:
            rows.append(_restrict(full, basis, gi))
            labels.append(("dl", gi, (ti, tj)))
    return rows, labels


def repair_view_forwarded(params: MrLrcParams, spec: EavesdropperSpec, rnd, L=None):
    """Rows for aggregates arriving at observed CPUs along the forwarding
    list: the CPU at position t sees the sum of contributions of everyone
    before it.  First in the list receives nothing (zero row)."""
    info = round_info(rnd)
    basis = info.repair_set
    L = L if L is not None else _coeff_matrix(params, basis)
    F = params.field
    order = info.flist or ()
    rows, labels = [], []
    for (ti, tj) in info.global_positions:
        full = _row_at(params, L, ti, tj)
        part = [_restrict(full, basis, gi) for gi in order]
        for idx, gi in enumerate(order):
            if gi not in spec.l2_groups:
                continue
            agg = [0] * len(basis)
            for up in range(idx):
                agg = [F.add(a, b) for a, b in zip(agg, part[up])]
            rows.append(agg)
            labels.append(("fw", gi, (ti, tj)))
    return rows, labels


def assemble_observation(params: MrLrcParams, spec: EavesdropperSpec,
                         rnd) -> ObservationMatrix:
    info = round_info(rnd)
    basis = info.repair_set
    L = _coeff_matrix(params, basis)
    st_rows, st_labels, raw = static_view(params, spec, basis, L)
    if info.scheme == "direct":
        dl_rows, dl_labels = repair_view_direct(params, spec, info, L)
    elif info.scheme == "forwarded":
        dl_rows, dl_labels = repair_view_forwarded(params, spec, info, L)
    elif info.scheme == "naive":
        dl_rows, dl_labels = [], []
        if info.target in spec.l2_groups:
            for t, pos in enumerate(basis):
                if pos[0] != info.target:
                    unit = [0] * len(basis)
                    unit[t] = 1
                    dl_rows.append(unit)
                    dl_labels.append(("raw", pos[0], pos))
    else:
        raise ConstraintError(f"no eavesdropper model for scheme {info.scheme!r}")
    return ObservationMatrix(tuple(basis),
                             tuple(tuple(r) for r in st_rows), tuple(st_labels),
                             tuple(tuple(r) for r in dl_rows), tuple(dl_labels), raw)


def eavesdropped_dimension(field: ExtField, obs: ObservationMatrix) -> int:
    """Rank of everything the eavesdropper saw; k_s = k - this."""
    return rank(field, obs.all_rows())


def check_l1_intact(spec: EavesdropperSpec, failed_positions) -> None:
    bad = sorted(set(spec.l1_nodes) & set(tuple(p) for p in failed_positions))
    if bad:
        raise ConstraintError(
            f"l1 nodes {bad} fail during the scenario; the analysis requires them intact")


def verify_observation(params: MrLrcParams, spec: EavesdropperSpec,
                       obs: ObservationMatrix, rnd, truth) -> tuple[int, int]:
    """Cross-check every observation row against the simulation.

    Dotting a row with the normalized repair-set values must reproduce
    the symbol it models: the stored value for static rows, the logged
    wire payload for repair rows (a contributor's own term and a
    head-of-list aggregate have no wire symbol; the first is covered by
    the per-locator sum check, the second must be the zero row).  Also
    checks that each globally repaired value actually delivered equals
    the ground truth.  Returns (checks passed, checks run).
    """
    F = params.field
    info = round_info(rnd)
    messages = tuple(getattr(rnd, "messages", ()) or
                     (rnd.get("messages", ()) if isinstance(rnd, dict) else ()))
    basis = obs.basis
    c_norm = [F.div(truth[phi_global(i, j, params.r, params.delta)],
                    params.ext_beta(i, j)) for i, j in basis]

    def norm_truth(i, j):
        return F.div(truth[phi_global(i, j, params.r, params.delta)],
                     params.ext_beta(i, j))

    def payload_of(frm, to, flat):
        hits = [msg.payload for msg in messages
                if msg.from_cpu == frm and msg.to_cpu == to
                and msg.locator_flat == flat]
        assert len(hits) == 1, \
            f"expected one message {frm}->{to} for locator {flat}, saw {len(hits)}"
        return hits[0]

    ok = total = 0
    for row, lab in zip(obs.static_rows, obs.static_labels):
        _, i, j = lab
        total += 1
        ok += row_dot(F, row, c_norm) == norm_truth(i, j)
    order = info.flist or ()
    sums: dict[Position, int] = {}
    for row, lab in zip(obs.repair_rows, obs.repair_labels):
        kind, gi, pos = lab
        got = row_dot(F, row, c_norm)
        total += 1
        if kind == "dl":
            sums[pos] = F.add(sums.get(pos, 0), got)
            if gi == info.target:
                ok += 1
                continue
            flat = phi_global(pos[0], pos[1], params.r, params.delta)
            ok += got == payload_of(gi, info.target, flat)
        elif kind == "fw":
            if order and gi == order[0]:
                ok += all(v == 0 for v in row)
                continue
            flat = phi_global(pos[0], pos[1], params.r, params.delta)
            prev = order[order.index(gi) - 1]
            ok += got == payload_of(prev, gi, flat)
        elif kind == "raw":
            flat = phi_global(pos[0], pos[1], params.r, params.delta)
            want = payload_of(pos[0], info.target, flat)
            ok += F.mul(got, params.ext_beta(*pos)) == want
        else:
            raise AssertionError(f"unknown row label {lab!r}")
    if info.scheme == "direct":
        for pos, s in sums.items():
            total += 1
            ok += s == norm_truth(*pos)
    if info.scheme == "forwarded" and len(order) >= 2:
        # the wire aggregate excludes the target's own term, so it must
        # equal the expansion row with the target-group columns zeroed
        L = _coeff_matrix(params, basis)
        for pos in info.global_positions:
            flat = phi_global(pos[0], pos[1], params.r, params.delta)
            full = _row_at(params, L, pos[0], pos[1])
            wire = [0 if basis[t][0] == info.target else v
                    for t, v in enumerate(full)]
            total += 1
            ok += payload_of(order[-2], info.target, flat) == row_dot(F, wire, c_norm)
    return ok, total


# ---------------------------------------------------------------------------
# staged row reduction, mirroring the worked elimination
# ---------------------------------------------------------------------------

def staged_reduction(field: ExtField, obs: ObservationMatrix, rnd):
    """Replay of the by-hand rank computation, as (name, rows, rank) stages:

    M:    the full stack.
    M':   drop static rows of the observed target at its globally repaired
          positions (each equals its group's own dl row there plus the
          other groups' dl rows, so the rank is unchanged).
    M'':  eliminate the columns of unit static rows from all other rows.
    M''': surviving repair rows on surviving columns, zero rows dropped;
          rank(M) = (number of unit rows) + rank(M''').
    """
    info = round_info(rnd)
    M = obs.all_rows()
    stages = [("M", [r[:] for r in M], rank(field, M))]
    repaired = set(info.global_positions)
    keep_static = [t for t, lab in enumerate(obs.static_labels)
                   if not (lab[0] == "l2" and lab[1] == info.target
                           and (lab[1], lab[2]) in repaired)]
    mprime = [list(obs.static_rows[t]) for t in keep_static] + [list(r) for r in obs.repair_rows]
    n_static = len(keep_static)
    stages.append(("M'", [r[:] for r in mprime], rank(field, mprime)))
    unit_rows = []
    for t in range(n_static):
        row = mprime[t]
        nz = [c for c, v in enumerate(row) if v]
        if len(nz) == 1 and row[nz[0]] == 1:
            unit_rows.append((t, nz[0]))
    unit_cols = {c for _, c in unit_rows}
    unit_idx = {t for t, _ in unit_rows}
    mdd = []
    for t, row in enumerate(mprime):
        if t in unit_idx:
            mdd.append(row[:])
            continue
        new = row[:]
        for _, c in unit_rows:
            new[c] = 0
        mdd.append(new)
    stages.append(("M''", [r[:] for r in mdd], rank(field, mdd)))
    keep_cols = [c for c in range(len(obs.basis)) if c not in unit_cols]
    residual = []
    for t in range(n_static, len(mdd)):
        row = [mdd[t][c] for c in keep_cols]
        if any(row):
            residual.append(row)
    # static non-unit rows also survive into the residual block
    for t in range(n_static):
        if t not in unit_idx:
            row = [mdd[t][c] for c in keep_cols]
            if any(row):
                residual.append(row)
    r3 = rank(field, residual)
    stages.append(("M'''", residual, r3))
    assert stages[0][2] == stages[1][2] == stages[2][2]
    assert stages[0][2] == len(unit_rows) + r3
    return stages


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _hypotheses(r, h, k, l1, l2, clamp):
    problems = []
    if not (1 <= h <= r):
        problems.append(f"need 1 <= h <= r: h = {h}, r = {r}")
    if l1 + l2 * r >= k:
        problems.append(f"need l1 + l2*r < k: {l1} + {l2}*{r} >= {k}")
    if problems and not clamp:
        raise ConstraintError("; ".join(problems))
    for p in problems:
        warnings.warn(f"outside guaranteed regime ({p}); clamping", stacklevel=3)


def eavesdropped_dim_direct(g, r, h, k, l1, l2, e, clamp=False) -> int:
    if l2 == 0:
        return min(k, l1)
    _hypotheses(r, h, k, l1, l2, clamp)
    if len(e) != g:
        raise ConstraintError(f"e must have one entry per group: {len(e)} != {g}")
    return l2 * r + l1 - h + sum(min(h, r - ei) for ei in e)


def secrecy_dim_direct(g, r, h, k, l1, l2, e, clamp=False) -> int:
    """k_s achievable against (l1, l2) eavesdroppers under direct repair."""
    if l2 == 0:
        return max(0, k - l1)
    ke = eavesdropped_dim_direct(g, r, h, k, l1, l2, e, clamp)
    ks = k - ke
    if ks < 0:
        warnings.warn(f"formula gave k_s = {ks} < 0; clamping to 0", stacklevel=2)
        return 0
    return ks


def upstream_window(flist, l2_groups, i):
    """F'_up,i: groups strictly after the nearest upstream observed group.

    Everything an upstream observed CPU already saw (its own inbound
    aggregate) cancels out of the aggregate arriving at i, so only the
    window after it contributes new rank.
    """
    flist = list(flist)
    if i not in flist:
        return []
    idx = flist.index(i)
    upstream = flist[:idx]
    cut = -1
    for t, gi in enumerate(upstream):
        if gi in l2_groups:
            cut = t
    return upstream[cut + 1:]


def eavesdropped_dim_forwarded(g, r, h, k, l1, l2, flist, l2_groups, e, clamp=False) -> int:
    _hypotheses(r, h, k, l1, l2, clamp)
    if len(e) != g:
        raise ConstraintError(f"e must have one entry per group: {len(e)} != {g}")
    extra = 0
    for i in l2_groups:
        window = upstream_window(flist, l2_groups, i)
        extra += min(h, sum(r - e[j - 1] for j in window))
    return l2 * r + l1 + extra


def secrecy_dim_forwarded(g, r, h, k, l1, l2, flist, l2_groups, e, clamp=False) -> int:
    """k_s under aggregate-and-forward repair along flist."""
    if g <= 2:
        return max(0, k - (l2 * r + l1))
    ke = eavesdropped_dim_forwarded(g, r, h, k, l1, l2, flist, l2_groups, e, clamp)
    ks = k - ke
    if ks < 0:
        warnings.warn(f"formula gave k_s = {ks} < 0; clamping to 0", stacklevel=2)
        return 0
    return ks


def secrecy_dim_local_only(g, r, l1, l2) -> int:
    """Baseline with no global parities (k = r*g): storage-only leakage."""
    return max(0, r * g - (l2 * r + l1))


# ---------------------------------------------------------------------------
# exhaustive oracles
# ---------------------------------------------------------------------------

def entropy_rank_check(field: ExtField, M) -> tuple[int, int]:
    """(exact entropy of M K in field-symbol units, rank of M), K uniform.

    The image of a uniform vector under a linear map is uniform on a
    subspace of size |F|^rank, which is verified rather than assumed:
    counts must be flat and the support size a power of |F|.
    """
    cols = len(M[0]) if M else 0
    counts: dict[tuple, int] = {}
    for vec in itertools.product(range(field.order), repeat=cols):
        img = tuple(_dot_row(field, row, vec) for row in M)
        counts[img] = counts.get(img, 0) + 1
    support = len(counts)
    assert len(set(counts.values())) <= 1, "image of uniform input must be uniform"
    t = 0
    s = support
    while s > 1:
        assert s % field.order == 0, "support size must be a power of |F|"
        s //= field.order
        t += 1
    return t, rank(field, M)


def _dot_row(field, row, vec):
    acc = 0
    for a, b in zip(row, vec):
        if a and b:
            acc = field.add(acc, field.mul(a, b))
    return acc


def _entropy_of(counts_support: int, q: int, m: int) -> Fraction:
    t = 0
    s = counts_support
    while s > 1:
        assert s % q == 0, "support must be a power of q for exact entropy"
        s //= q
        t += 1
    return Fraction(t, m)


def mi_oracle(params: MrLrcParams, k_e: int, spec: EavesdropperSpec,
              failures, scheme: str, flist=None, policy: str = "default",
              limit: int = 1 << 18) -> dict:
    """Exhaustive I(U_s; E) over every message, exact in rationals.

    Enumerates all q^(m k) messages, runs the fixed scenario for each,
    and collects E = (storage the eavesdropper reads, symbols arriving
    at observed CPUs).  All variables are linear images of the uniform
    message, so each distribution is uniform on its support and the
    entropies are exact; units are log base q^m (field symbols).

    Returns a dict with I, H_E, H_R (padding entropy), H_Us and the
    conditions behind zero leakage: H_E <= H_R and H(R | U_s, E) = 0.
    """
    from .dss import DssState, run_all_repairs
    F = params.field
    k = params.k
    total = F.order ** k
    if total > limit:
        raise ConstraintError(
            f"instance needs {total} message enumerations, above the limit {limit}")
    check_l1_intact(spec, failures)
    static_pos = sorted(spec.static_positions(params))
    joint: set[tuple] = set()
    support_e: set[tuple] = set()
    support_us: set[tuple] = set()
    full: set[tuple] = set()
    count_e: dict[tuple, int] = {}
    count_joint: dict[tuple, int] = {}
    for msg_idx in range(total):
        coeffs = []
        v = msg_idx
        for _ in range(k):
            coeffs.append(v % F.order)
            v //= F.order
        pad = tuple(coeffs[:k_e])
        u_s = tuple(coeffs[k_e:])
        f = SkewPoly.make(F, coeffs)
        cw = mrlrc_encode(params, f)
        state = DssState(params, cw)
        state.fail_nodes(failures)
        rounds = run_all_repairs(state, scheme=scheme, flist=flist, policy=policy,
                                 observed=spec.static_positions(params))
        e_static = tuple(cw.value(i, j) for i, j in static_pos)
        e_traffic = tuple(m.payload for rnd in rounds for m in rnd.messages
                          if m.to_cpu in spec.l2_groups)
        e = e_static + e_traffic
        support_e.add(e)
        support_us.add(u_s)
        joint.add((u_s, e))
        full.add((u_s, e, pad))
        count_e[e] = count_e.get(e, 0) + 1
        count_joint[(u_s, e)] = count_joint.get((u_s, e), 0) + 1
    assert len(set(count_e.values())) <= 1
    assert len(set(count_joint.values())) <= 1
    q, m = F.q, F.m
    H_e = _entropy_of(len(support_e), q, m)
    H_us = _entropy_of(len(support_us), q, m)
    H_joint = _entropy_of(len(joint), q, m)
    I = H_us + H_e - H_joint
    H_r_given = _entropy_of(len(full), q, m) - H_joint
    return {
        "I": I,
        "H_E": H_e,
        "H_Us": H_us,
        "H_R": Fraction(k_e),
        "H_R_given_UsE": H_r_given,
        "pad_covers_observations": H_e <= Fraction(k_e),
        "pad_determined": H_r_given == 0,
        "messages_enumerated": total,
    }


# ---------------------------------------------------------------------------
# Vandermonde-product rank helper
# ---------------------------------------------------------------------------

def vandermonde_product_rank(field: ExtField, a_k, a_d, blocks=None) -> int:
    """Rank of M with M[t][i] = l_i(a_d[t]), the l_i interpolating on a_k.

    Built twice (per-row expansion and explicit inverse-times-Vandermonde
    product) and compared; asserts full rank min(k, d), and full rank of
    the column blocks if given (each block a list of column indices).
    """
    a_k, a_d = list(a_k), list(a_d)
    k, d = len(a_k), len(a_d)
    L = lagrange_coefficient_matrix(field, a_k)
    M = [expansion_row(field, L, b) for b in a_d]
    Vd = sigma_vandermonde(field, a_d, nrows=k).as_rows()
    prod = mat_mul(field, L, Vd)  # k x d; M is its transpose
    assert all(M[t][i] == prod[i][t] for t in range(d) for i in range(k)), \
        "expansion rows disagree with the inverse-Vandermonde product"
    rk = rank(field, M)
    assert rk == min(k, d), f"rank {rk} != min(k, d) = {min(k, d)}"
    if blocks:
        for block in blocks:
            sub = [[row[c] for c in block] for row in M]
            want = min(d, len(block))
            got = rank(field, sub)
            assert got == want, f"block {block} rank {got} != {want}"
    return rk
