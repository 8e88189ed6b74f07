"""The outer evaluation code: g groups of r symbols from one degree-< k
skew polynomial.

Locators are built from one conjugacy-class representative a_i per group
and a shared F_q-independent basis beta_0, ..., beta_(r-1):

    b_(i,j) = a_i * beta_j^(q-1),      c_(i,j) = f(b_(i,j)) * beta_j.

Distinct-norm representatives keep the groups in distinct conjugacy
classes, so any selection of at most r locators per group is
P-independent and the code is MDS-like under such selections: any k
symbols meeting the per-group cap determine f.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstraintError, UnrecoverableError
from .galois import ExtField, conjugacy_representatives
from .skew import SkewPoly, is_p_independent, newton_interpolate, skew_eval


def beta_basis(field: ExtField, r: int) -> tuple[int, ...]:
    """1, z, ..., z^(r-1): the first r polynomial-basis elements."""
    if r > field.m:
        raise ConstraintError(f"need r <= m: r = {r}, m = {field.m}")
    theta = field.from_coords(tuple(int(i == 1) for i in range(field.m))) if field.m > 1 else 0
    return tuple(field.pow(theta, j) for j in range(r))


@dataclass(frozen=True)
class LrsParams:
    field: ExtField
    g: int
    r: int
    k: int
    reps: tuple[int, ...]       # a_i, one conjugacy representative per group
    betas: tuple[int, ...]      # shared beta basis, length r
    locators: tuple[int, ...]   # b, length n = r*g, group-major order

    @property
    def n(self) -> int:
        return self.r * self.g

    def locator(self, i: int, j: int) -> int:
        """Group i in [1, g], in-group index j in [0, r-1]."""
        return self.locators[(i - 1) * self.r + j]

    def beta_at(self, mu: int) -> int:
        return self.betas[mu % self.r]


def lrs_setup(field: ExtField, g: int, r: int, k: int) -> LrsParams:
    if not (1 <= g <= field.q - 1):
        raise ConstraintError(f"need 1 <= g <= q - 1: g = {g}, q = {field.q}")
    if not (1 <= r <= field.m):
        raise ConstraintError(f"need 1 <= r <= m: r = {r}, m = {field.m}")
    if not (1 <= k <= r * g):
        raise ConstraintError(f"need 1 <= k <= r*g: k = {k}, r*g = {r * g}")
    reps = tuple(conjugacy_representatives(field, g))
    betas = beta_basis(field, r)
    qm1 = field.q - 1
    locators = tuple(
        field.mul(a, field.pow(beta, qm1)) for a in reps for beta in betas)
    assert len(set(locators)) == len(locators)
    assert is_p_independent(field, locators)
    return LrsParams(field, g, r, k, reps, betas, locators)


def lrs_encode(params: LrsParams, f: SkewPoly) -> list[int]:
    """c_mu = f(b_mu) * beta_(j(mu)); requires deg f < k."""
    if f.degree >= params.k:
        raise ConstraintError(f"need deg f < k: deg = {f.degree}, k = {params.k}")
    F = params.field
    return [F.mul(skew_eval(f, b), params.beta_at(mu))
            for mu, b in enumerate(params.locators)]


def lrs_encode_message(params: LrsParams, message) -> list[int]:
    """Encode a length-k coefficient vector (low degree first)."""
    if len(message) != params.k:
        raise ConstraintError(f"message length {len(message)} != k = {params.k}")
    return lrs_encode(params, SkewPoly.make(params.field, message))


def lrs_erasure_decode(params: LrsParams, known: dict[int, int]) -> SkewPoly:
    """Recover f from any >= k known positions (flat index -> value).

    Positions are normalized by their beta factor and the
    lexicographically smallest k of them are interpolated; remaining
    known values are then checked against the result.  Every subset of
    the locator set with at most r positions per group is P-independent,
    and groups here have exactly r positions, so any k positions qualify.
    """
    if len(known) < params.k:
        raise UnrecoverableError(
            f"need at least k = {params.k} intact symbols, have {len(known)}")
    F = params.field
    chosen = sorted(known)[: params.k]
    points = [(params.locators[mu], F.div(known[mu], params.beta_at(mu))) for mu in chosen]
    f = newton_interpolate(F, points)
    for mu in sorted(known)[params.k:]:
        want = F.mul(skew_eval(f, params.locators[mu]), params.beta_at(mu))
        if want != known[mu]:
            raise UnrecoverableError(
                f"known symbols are inconsistent at position {mu}")
    return f
