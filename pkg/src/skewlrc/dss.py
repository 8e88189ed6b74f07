"""Distributed storage state, failures, and the three repair schemes.

One CPU per group fronts its r + delta - 1 nodes.  Repair of a group
with at most delta - 1 failures is purely local (solve the group block
from any r in-group survivors).  A group with more failures picks the
lexicographically first failed positions to repair globally, exactly as
many as exceed the local budget, and the rest locally afterwards:

- naive: the target CPU downloads raw symbols from other groups until
  it holds k and re-interpolates the message polynomial.
- direct: every contributing CPU interpolates a local polynomial that
  agrees with its own share on the repair set and vanishes on everyone
  else's, then sends its evaluation at each failed locator straight to
  the target; the target sums.
- forwarded: same local polynomials, but evaluations travel along a
  forwarding list, each CPU adding its term to a running aggregate, so
  every CPU sees one inbound symbol per failed locator instead of one
  per contributor.

Every inter-CPU symbol is logged.  Transcript lines are
"round,scheme,from_cpu,to_cpu,failed_locator_index,payload" with the
payload as base-field coordinates.  For naive rounds the index column
carries the flat index of the node being read (those messages are raw
reads, not per-failed-locator evaluations).
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field as dc_field

from .errors import ConstraintError, SelectionError, UnrecoverableError
from .galois import dump_element
from .mrlrc import (GlobalCodeword, MrLrcParams, local_block_solve, local_value,
                    phi_global)
from .skew import (SkewPoly, expansion_row, lagrange_coefficient_matrix,
                   rank, sigma_vandermonde, skew_eval)

Position = tuple[int, int]  # (group in [1, g], node in [0, r + delta - 2])


@dataclass(frozen=True)
class Message:
    from_cpu: int
    to_cpu: int
    locator_flat: int
    payload: int


@dataclass(frozen=True)
class RepairSet:
    """k intact positions, at most r per group, P-independent locators."""

    positions: tuple[Position, ...]  # sorted lexicographically

    def groups(self) -> tuple[int, ...]:
        """Contributing groups, ascending (the round's Delta_gl,1)."""
        return tuple(sorted({i for i, _ in self.positions}))

    def in_group(self, i: int) -> tuple[Position, ...]:
        return tuple(p for p in self.positions if p[0] == i)

    def index_of(self, pos: Position) -> int:
        return self.positions.index(pos)


@dataclass(frozen=True)
class RepairRound:
    index: int
    scheme: str                       # "local" | "naive" | "direct" | "forwarded"
    target: int
    repair_set: RepairSet | None      # None for local rounds
    flist: tuple[int, ...] | None     # forwarded only: effective order, target last
    global_positions: tuple[Position, ...]
    messages: tuple[Message, ...]


class LocalRepairResult(enum.Enum):
    NOOP = "noop"
    REPAIRED = "repaired"
    NEEDS_GLOBAL = "needs-global"


class DssState:
    """Mutable node array plus the immutable ground truth it must match."""

    def __init__(self, params: MrLrcParams, codeword: GlobalCodeword):
        assert codeword.params is params or codeword.params == params
        self.params = params
        self.truth = codeword.values
        self.values = list(codeword.values)
        self.intact = [True] * params.big_n
        self.rounds: list[RepairRound] = []

    def flat(self, pos: Position) -> int:
        return phi_global(pos[0], pos[1], self.params.r, self.params.delta)

    def is_intact(self, pos: Position) -> bool:
        return self.intact[self.flat(pos)]

    def read(self, pos: Position) -> int:
        mu = self.flat(pos)
        if not self.intact[mu]:
            raise UnrecoverableError(f"read of failed node {pos}")
        return self.values[mu]

    def failed_in_group(self, i: int) -> list[int]:
        s = self.params.group_size
        base = (i - 1) * s
        return [j for j in range(s) if not self.intact[base + j]]

    def intact_positions(self) -> list[Position]:
        return [p for p in self.params.positions() if self.is_intact(p)]

    def needs_global(self, i: int) -> bool:
        return len(self.failed_in_group(i)) > self.params.delta - 1

    def fail_nodes(self, positions):
        for pos in positions:
            mu = self.flat(pos)
            self.intact[mu] = False
            self.values[mu] = 0  # quarantined; reads are refused anyway

    def _restore(self, pos: Position, value: int):
        mu = self.flat(pos)
        assert value == self.truth[mu], f"repair of {pos} disagrees with ground truth"
        self.values[mu] = value
        self.intact[mu] = True


def global_need(state: DssState, i: int) -> int:
    return max(0, len(state.failed_in_group(i)) - (state.params.delta - 1))


def total_global_need(state: DssState) -> int:
    return sum(global_need(state, i) for i in range(1, state.params.g + 1))


# ---------------------------------------------------------------------------
# repair-set selection
# ---------------------------------------------------------------------------

def choose_repair_set(state: DssState, policy: str = "default",
                      observed=frozenset()) -> RepairSet:
    """k intact positions, at most r per group.

    default: lexicographically smallest.  adversarial: positions in the
    observed set first (then lexicographic fill), maximizing the overlap
    of the repair set with what an eavesdropper already sees.
    """
    params = state.params
    need = total_global_need(state)
    if need > params.h:
        raise UnrecoverableError(
            f"{need} failures beyond local budgets exceeds h = {params.h}")
    intact = state.intact_positions()
    if policy == "default":
        ordered = intact
    elif policy == "adversarial":
        observed = set(observed)
        ordered = sorted(intact, key=lambda p: (p not in observed, p))
    else:
        raise ConstraintError(f"unknown repair-set policy {policy!r}")
    taken: list[Position] = []
    per_group = {i: 0 for i in range(1, params.g + 1)}
    for pos in ordered:
        if per_group[pos[0]] < params.r:
            taken.append(pos)
            per_group[pos[0]] += 1
            if len(taken) == params.k:
                break
    if len(taken) < params.k:
        raise UnrecoverableError(
            f"only {len(taken)} independent intact symbols available, need k = {params.k}")
    taken.sort()
    rs = RepairSet(tuple(taken))
    locs = [params.ext_locator(i, j) for i, j in rs.positions]
    V = sigma_vandermonde(params.field, locs).as_rows()
    if rank(params.field, V) != params.k:
        raise SelectionError("chosen repair set is not P-independent")
    return rs


# ---------------------------------------------------------------------------
# local polynomials
# ---------------------------------------------------------------------------

def local_polynomials(state: DssState, rs: RepairSet) -> dict[int, SkewPoly]:
    """Per contributing group i, the degree-< k polynomial matching the
    group's normalized shares on the repair set and zero on the others.

    Their sum is the message polynomial, which is what makes per-group
    evaluation shipping possible.
    """
    params = state.params
    F = params.field
    locs = [params.ext_locator(i, j) for i, j in rs.positions]
    L = lagrange_coefficient_matrix(F, locs)
    k = params.k
    out: dict[int, SkewPoly] = {}
    for gi in rs.groups():
        coeffs = [0] * k
        for t, (i, j) in enumerate(rs.positions):
            if i != gi:
                continue
            v = F.div(state.read((i, j)), params.ext_beta(i, j))
            if v == 0:
                continue
            for s in range(k):
                if L[t][s]:
                    coeffs[s] = F.add(coeffs[s], F.mul(v, L[t][s]))
        out[gi] = SkewPoly.make(F, coeffs)
    return out


# ---------------------------------------------------------------------------
# repair schemes
# ---------------------------------------------------------------------------

def local_repair(state: DssState, i: int) -> LocalRepairResult:
    """Restore group i from its own survivors if within the local budget."""
    failed = state.failed_in_group(i)
    if not failed:
        return LocalRepairResult.NOOP
    if len(failed) > state.params.delta - 1:
        return LocalRepairResult.NEEDS_GLOBAL
    known = {j: state.read((i, j)) for j in range(state.params.group_size)
             if state.is_intact((i, j))}
    block = local_block_solve(state.params, i, known)
    for j in failed:
        state._restore((i, j), local_value(state.params, i, j, block))
    state.rounds.append(RepairRound(
        index=len(state.rounds), scheme="local", target=i, repair_set=None,
        flist=None, global_positions=(), messages=()))
    return LocalRepairResult.REPAIRED


def _global_split(state: DssState, target: int) -> tuple[list[int], list[int]]:
    failed = state.failed_in_group(target)
    if len(failed) <= state.params.delta - 1:
        raise ConstraintError(
            f"group {target} has {len(failed)} failures, within the local budget; "
            "use local_repair")
    n_global = len(failed) - (state.params.delta - 1)
    return failed[:n_global], failed[n_global:]


def _finish_locally(state: DssState, target: int, local_js):
    if not local_js:
        return
    known = {j: state.read((target, j)) for j in range(state.params.group_size)
             if state.is_intact((target, j))}
    block = local_block_solve(state.params, target, known)
    for j in local_js:
        state._restore((target, j), local_value(state.params, target, j, block))


def direct_repair(state: DssState, target: int, repair_set: RepairSet | None = None,
                  policy: str = "default", observed=frozenset()) -> RepairRound:
    """Each contributing CPU ships its local-polynomial evaluation at every
    globally repaired locator straight to the target CPU."""
    params = state.params
    F = params.field
    global_js, local_js = _global_split(state, target)
    rs = repair_set or choose_repair_set(state, policy, observed)
    polys = local_polynomials(state, rs)
    messages: list[Message] = []
    for j in global_js:
        b = params.ext_locator(target, j)
        mu = phi_global(target, j, params.r, params.delta)
        total = 0
        for gi in rs.groups():
            term = skew_eval(polys[gi], b)
            total = F.add(total, term)
            if gi != target:
                messages.append(Message(gi, target, mu, term))
        state._restore((target, j), F.mul(total, params.ext_beta(target, j)))
    _finish_locally(state, target, local_js)
    rnd = RepairRound(len(state.rounds), "direct", target, rs, None,
                      tuple((target, j) for j in global_js), tuple(messages))
    state.rounds.append(rnd)
    return rnd


def effective_flist(rs: RepairSet, target: int, flist=None) -> tuple[int, ...]:
    """Forwarding order over contributing groups, target last.

    A supplied order must list every contributing group; groups with
    nothing to add are dropped.  Default is ascending contributors then
    the target.
    """
    contributors = [i for i in rs.groups() if i != target]
    if flist is None:
        return tuple(contributors) + (target,)
    flist = list(flist)
    if len(set(flist)) != len(flist):
        raise ConstraintError(f"forwarding list repeats a group: {flist}")
    if target not in flist or flist[-1] != target:
        raise ConstraintError(f"forwarding list must end at the repairing group {target}")
    missing = [i for i in contributors if i not in flist]
    if missing:
        raise ConstraintError(
            f"forwarding list omits contributing groups {missing}")
    return tuple(i for i in flist if i in contributors or i == target)


def forwarded_repair(state: DssState, target: int, repair_set: RepairSet | None = None,
                     flist=None, policy: str = "default",
                     observed=frozenset()) -> RepairRound:
    """Aggregate-and-forward: one inbound symbol per CPU per failed locator."""
    params = state.params
    F = params.field
    global_js, local_js = _global_split(state, target)
    rs = repair_set or choose_repair_set(state, policy, observed)
    order = effective_flist(rs, target, flist)
    polys = local_polynomials(state, rs)
    messages: list[Message] = []
    for j in global_js:
        b = params.ext_locator(target, j)
        mu = phi_global(target, j, params.r, params.delta)
        s = 0
        for idx, gi in enumerate(order[:-1]):
            s = F.add(s, skew_eval(polys[gi], b))
            messages.append(Message(gi, order[idx + 1], mu, s))
        if target in polys:
            s = F.add(s, skew_eval(polys[target], b))
        state._restore((target, j), F.mul(s, params.ext_beta(target, j)))
    _finish_locally(state, target, local_js)
    rnd = RepairRound(len(state.rounds), "forwarded", target, rs, order,
                      tuple((target, j) for j in global_js), tuple(messages))
    state.rounds.append(rnd)
    return rnd


def naive_repair(state: DssState, target: int) -> RepairRound:
    """Target CPU downloads raw symbols until it can re-interpolate f."""
    params = state.params
    F = params.field
    failed = state.failed_in_group(target)
    if len(failed) <= params.delta - 1:
        raise ConstraintError(
            f"group {target} has {len(failed)} failures, within the local budget; "
            "use local_repair")
    if total_global_need(state) > params.h:
        raise UnrecoverableError(
            f"{total_global_need(state)} failures beyond local budgets exceeds h = {params.h}")
    own = [(target, j) for j in range(params.group_size)
           if state.is_intact((target, j))]
    take: list[Position] = list(own)
    per_group = {i: 0 for i in range(1, params.g + 1)}
    per_group[target] = len(own)
    if len(own) > params.r:
        raise AssertionError("globally failing group cannot hold r intact nodes")
    messages: list[Message] = []
    for pos in state.intact_positions():
        if len(take) == params.k:
            break
        if pos[0] == target or per_group[pos[0]] >= params.r:
            continue
        take.append(pos)
        per_group[pos[0]] += 1
        messages.append(Message(pos[0], target, state.flat(pos), state.read(pos)))
    if len(take) < params.k:
        raise UnrecoverableError(
            f"only {len(take)} independent intact symbols available, need k = {params.k}")
    take.sort()
    rs = RepairSet(tuple(take))
    from .skew import newton_interpolate
    points = [(params.ext_locator(i, j), F.div(state.read((i, j)), params.ext_beta(i, j)))
              for i, j in rs.positions]
    f = newton_interpolate(F, points)
    for j in failed:
        b = params.ext_locator(target, j)
        state._restore((target, j), F.mul(skew_eval(f, b), params.ext_beta(target, j)))
    rnd = RepairRound(len(state.rounds), "naive", target, rs, None,
                      tuple((target, j) for j in failed), tuple(messages))
    state.rounds.append(rnd)
    return rnd


_GLOBAL_SCHEMES = {
    "direct": direct_repair,
    "forwarded": forwarded_repair,
}


def run_all_repairs(state: DssState, scheme: str = "direct", flist=None,
                    policy: str = "default", observed=frozenset()) -> list[RepairRound]:
    """Local pass over all groups, then one global round per needy group.

    Groups are visited in ascending order; raises UnrecoverableError
    before mutating anything if the failure pattern exceeds the budget.
    """
    params = state.params
    if total_global_need(state) > params.h:
        raise UnrecoverableError(
            f"{total_global_need(state)} failures beyond local budgets exceeds h = {params.h}")
    start = len(state.rounds)
    for i in range(1, params.g + 1):
        local_repair(state, i)
    for i in range(1, params.g + 1):
        if state.needs_global(i):
            if scheme == "naive":
                naive_repair(state, i)
            elif scheme in _GLOBAL_SCHEMES:
                _GLOBAL_SCHEMES[scheme](state, i, policy=policy, observed=observed,
                                        **({"flist": flist} if scheme == "forwarded" else {}))
            else:
                raise ConstraintError(f"unknown repair scheme {scheme!r}")
    assert all(state.intact), "repairs left failed nodes behind"
    assert tuple(state.values) == state.truth
    return state.rounds[start:]


# ---------------------------------------------------------------------------
# transcripts
# ---------------------------------------------------------------------------

def _fmt_positions(positions) -> str:
    return ",".join(f"{i}:{j}" for i, j in positions) or "-"


def _parse_positions(text: str):
    if text == "-":
        return ()
    return tuple(tuple(int(x) for x in part.split(":")) for part in text.split(","))


def write_transcript(rounds, field, out) -> None:
    """Line-delimited text; deterministic for a given configuration."""
    close = False
    if isinstance(out, str):
        out = open(out, "w")
        close = True
    try:
        out.write("# transcript v1\n")
        for rnd in rounds:
            flist = ",".join(str(i) for i in rnd.flist) if rnd.flist else "-"
            rset = _fmt_positions(rnd.repair_set.positions) if rnd.repair_set else "-"
            out.write(f"# round {rnd.index} scheme={rnd.scheme} target={rnd.target} "
                      f"repair_set={rset} flist={flist} "
                      f"globals={_fmt_positions(rnd.global_positions)}\n")
            for msg in rnd.messages:
                coords = ":".join(str(c) for c in field.coords(msg.payload))
                out.write(f"{rnd.index},{rnd.scheme},{msg.from_cpu},{msg.to_cpu},"
                          f"{msg.locator_flat},{coords}\n")
    finally:
        if close:
            out.close()


def transcript_text(rounds, field) -> str:
    buf = io.StringIO()
    write_transcript(rounds, field, buf)
    return buf.getvalue()


def parse_transcript(text: str, field) -> list[dict]:
    """Inverse of write_transcript, payloads decoded back to elements."""
    rounds: dict[int, dict] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line == "# transcript v1":
            continue
        if line.startswith("# round "):
            parts = line[2:].split()
            idx = int(parts[1])
            fields = dict(p.split("=", 1) for p in parts[2:])
            rounds[idx] = {
                "index": idx,
                "scheme": fields["scheme"],
                "target": int(fields["target"]),
                "repair_set": _parse_positions(fields["repair_set"]),
                "flist": tuple(int(x) for x in fields["flist"].split(","))
                         if fields["flist"] != "-" else None,
                "globals": _parse_positions(fields["globals"]),
                "messages": [],
            }
        elif not line.startswith("#"):
            idx_s, scheme, frm, to, mu, coords = line.split(",")
            payload = field.from_coords([int(c) for c in coords.split(":")])
            rounds[int(idx_s)]["messages"].append(
                Message(int(frm), int(to), int(mu), payload))
    return [rounds[i] for i in sorted(rounds)]
