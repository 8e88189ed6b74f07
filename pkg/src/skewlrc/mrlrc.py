"""Local MDS layering on top of the outer evaluation code.

Each outer group block of r symbols is multiplied by a systematic MDS
generator A_i of shape r x (r + delta - 1) over GF(q), giving groups
that tolerate any delta - 1 in-group erasures locally.  The key fact
exploited throughout: the extended value

    c_i^(j) = (outer block) . A_i[:, j] = f(b~_i^(j)) * beta~_i^(j)

where beta~_i^(j) = sum_t beta_t A_i[t][j] andb~_i^(j) = a_i *
(beta~_i^(j))^(q-1); i.e. taking F_q-combinations inside a group lands
on new evaluation points of the same polynomial in the same conjugacy
class.  Both routes are implemented and tested against each other.

The resulting code has n = r*g information-bearing coordinates, length
N = g*(r + delta - 1) and h = r*g - k heavy (global) parities; it can
repair any delta - 1 erasures per group locally plus any h more
anywhere, which is what is_maximally_recoverable verifies by exhaustion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ConstraintError
from .galois import ExtField
from .lrs import LrsParams, lrs_setup
from .skew import SkewPoly, mat_inv, mat_mul, rank, skew_eval


# ---------------------------------------------------------------------------
# index maps between (group i in [1,g], node j) and flat indices
# ---------------------------------------------------------------------------

def phi_global(i: int, j: int, r: int, delta: int) -> int:
    """Flat index in [0, N) of node j of group i, stride r + delta - 1."""
    return (i - 1) * (r + delta - 1) + j


def phi_global_inverse(mu: int, r: int, delta: int) -> tuple[int, int]:
    s = r + delta - 1
    return mu // s + 1, mu % s


def phi_outer(i: int, j: int, r: int) -> int:
    """Flat index in [0, n) of outer symbol j of group i, stride r."""
    return (i - 1) * r + j


def phi_outer_inverse(mu: int, r: int) -> tuple[int, int]:
    return mu // r + 1, mu % r


def phi_narrow(i: int, j: int, r: int, delta: int) -> int:
    """Stride r + delta - 2 map, one column short of the group width.

    Only bijective for j in [0, r + delta - 3]; it collides at the group
    boundary otherwise (and coincides with phi_outer when delta = 2).
    phi_narrow_inverse is the exact inverse on that domain; the rest of
    the package indexes with phi_global / phi_outer.
    """
    return j + (r + delta - 2) * (i - 1)


def phi_narrow_inverse(mu: int, r: int, delta: int) -> tuple[int, int]:
    s = r + delta - 2
    return mu // s + 1, mu % s


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

def systematic_mds_generator(q: int, r: int, length: int) -> list[list[int]]:
    """[I_r | P] Reed-Solomon generator over GF(q), eval points 0..length-1.

    Needs q >= length so the points are distinct; every r x r minor of
    the result is then invertible.
    """
    if q < length:
        raise ConstraintError(f"need q >= r + delta - 1: q = {q}, length = {length}")
    base = ExtField(q, 1)
    V = [[base.pow(x, t) for x in range(length)] for t in range(r)]
    lead = [row[:r] for row in V]
    return mat_mul(base, mat_inv(base, lead), V)


@dataclass(frozen=True)
class MrLrcParams:
    outer: LrsParams
    delta: int
    local_generators: tuple[tuple[tuple[int, ...], ...], ...]  # A_i, over GF(q)
    ext_betas: tuple[tuple[int, ...], ...]      # beta~ per group, length r+delta-1
    ext_locators: tuple[tuple[int, ...], ...]   # b~ per group, length r+delta-1

    @property
    def field(self) -> ExtField:
        return self.outer.field

    @property
    def g(self) -> int:
        return self.outer.g

    @property
    def r(self) -> int:
        return self.outer.r

    @property
    def k(self) -> int:
        return self.outer.k

    @property
    def n(self) -> int:
        return self.outer.n

    @property
    def h(self) -> int:
        """Number of erasures correctable beyond the per-group delta - 1."""
        return self.n - self.k

    @property
    def group_size(self) -> int:
        return self.r + self.delta - 1

    @property
    def big_n(self) -> int:
        return self.g * self.group_size

    def positions(self):
        """All (i, j), group-major; flat order matches phi_global."""
        return [(i, j) for i in range(1, self.g + 1) for j in range(self.group_size)]

    def ext_beta(self, i: int, j: int) -> int:
        return self.ext_betas[i - 1][j]

    def ext_locator(self, i: int, j: int) -> int:
        return self.ext_locators[i - 1][j]


def mrlrc_setup(field: ExtField, g: int, r: int, delta: int, k: int,
                local_generators=None) -> MrLrcParams:
    """Build parameters; raises ConstraintError naming any violated bound.

    Custom local_generators (one r x (r+delta-1) matrix per group over
    GF(q)) are accepted with only a nonzero-extended-beta check, so that
    a defective generator can be fed to is_maximally_recoverable; the
    default systematic Reed-Solomon generators are MDS by construction.
    """
    if delta < 1:
        raise ConstraintError(f"need delta >= 1: delta = {delta}")
    if field.q <= max(g, r + delta - 2):
        raise ConstraintError(
            f"need q > max(g, r + delta - 2): q = {field.q}, g = {g}, r + delta - 2 = {r + delta - 2}")
    outer = lrs_setup(field, g, r, k)
    size = r + delta - 1
    if local_generators is None:
        A = systematic_mds_generator(field.q, r, size)
        local_generators = [A] * g
    if len(local_generators) != g:
        raise ConstraintError(f"need one local generator per group: got {len(local_generators)}")
    gens = []
    for A in local_generators:
        if len(A) != r or any(len(row) != size for row in A):
            raise ConstraintError(f"local generators must be {r} x {size}")
        if any(not (0 <= c < field.q) for row in A for c in row):
            raise ConstraintError("local generator entries must be GF(q) scalars")
        gens.append(tuple(tuple(row) for row in A))
    ext_betas = []
    ext_locators = []
    qm1 = field.q - 1
    for i in range(1, g + 1):
        A = gens[i - 1]
        a_i = outer.reps[i - 1]
        eb = []
        for j in range(size):
            v = 0
            for t in range(r):
                if A[t][j]:
                    v = field.add(v, field.mul(A[t][j], outer.betas[t]))
            eb.append(v)
        if any(v == 0 for v in eb):
            raise ConstraintError(
                f"local generator of group {i} has a zero column combination")
        ext_betas.append(tuple(eb))
        ext_locators.append(tuple(field.mul(a_i, field.pow(v, qm1)) for v in eb))
    return MrLrcParams(outer, delta, tuple(gens), tuple(ext_betas), tuple(ext_locators))


# ---------------------------------------------------------------------------
# encoding, both routes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalCodeword:
    params: MrLrcParams
    values: tuple[int, ...]  # length N, flat phi_global order

    def value(self, i: int, j: int) -> int:
        return self.values[phi_global(i, j, self.params.r, self.params.delta)]

    def block(self, i: int):
        s = self.params.group_size
        return list(self.values[(i - 1) * s: i * s])


def mrlrc_encode(params: MrLrcParams, f: SkewPoly) -> GlobalCodeword:
    """Evaluation route: c_i^(j) = f(b~_i^(j)) * beta~_i^(j)."""
    if f.degree >= params.k:
        raise ConstraintError(f"need deg f < k: deg = {f.degree}, k = {params.k}")
    F = params.field
    values = []
    for i in range(1, params.g + 1):
        for j in range(params.group_size):
            values.append(F.mul(skew_eval(f, params.ext_locator(i, j)), params.ext_beta(i, j)))
    return GlobalCodeword(params, tuple(values))


def mrlrc_encode_via_outer(params: MrLrcParams, f: SkewPoly) -> GlobalCodeword:
    """Matrix route: outer codeword times block-diagonal local generators."""
    from .lrs import lrs_encode
    F = params.field
    c_out = lrs_encode(params.outer, f)
    values = []
    for i in range(1, params.g + 1):
        block = c_out[(i - 1) * params.r: i * params.r]
        A = params.local_generators[i - 1]
        for j in range(params.group_size):
            v = 0
            for t in range(params.r):
                if A[t][j] and block[t]:
                    v = F.add(v, F.mul(A[t][j], block[t]))
            values.append(v)
    return GlobalCodeword(params, tuple(values))


def local_block_solve(params: MrLrcParams, i: int, known: dict[int, int]) -> list[int]:
    """Outer block of group i from any >= r known in-group values.

    known maps in-group index j to the stored value.  Uses the
    lexicographically smallest r columns; with an MDS local generator
    any r columns are invertible.
    """
    F = params.field
    A = params.local_generators[i - 1]
    if len(known) < params.r:
        raise ConstraintError(
            f"need >= r = {params.r} in-group values to solve group {i}, have {len(known)}")
    cols = sorted(known)[: params.r]
    sub = [[A[t][j] for j in cols] for t in range(params.r)]
    inv = mat_inv(F, sub)
    vals = [known[j] for j in cols]
    # block = vals . sub^-1  (row vector times inverse)
    return [
        _dot(F, vals, [inv[t][s] for t in range(params.r)])
        for s in range(params.r)
    ]


def local_value(params: MrLrcParams, i: int, j: int, block) -> int:
    """Value of node j of group i from the group's outer block."""
    F = params.field
    A = params.local_generators[i - 1]
    v = 0
    for t in range(params.r):
        if A[t][j] and block[t]:
            v = F.add(v, F.mul(A[t][j], block[t]))
    return v


def _dot(field, u, v):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = field.add(acc, field.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# secure message layout: random padding low, secret high
# ---------------------------------------------------------------------------

def secure_message(params: MrLrcParams, k_e: int, secret, rng) -> SkewPoly:
    """Coefficients 0..k_e-1 uniformly random, k_e..k-1 the secret."""
    k = params.k
    if not (0 <= k_e <= k):
        raise ConstraintError(f"need 0 <= k_e <= k: k_e = {k_e}, k = {k}")
    if len(secret) != k - k_e:
        raise ConstraintError(
            f"secret length {len(secret)} != k - k_e = {k - k_e}")
    pad = [params.field.random_element(rng) for _ in range(k_e)]
    return SkewPoly.make(params.field, pad + list(secret))


def secure_encode(params: MrLrcParams, k_e: int, secret, rng):
    f = secure_message(params, k_e, secret, rng)
    return f, mrlrc_encode(params, f)


# ---------------------------------------------------------------------------
# recoverability checker
# ---------------------------------------------------------------------------

def global_generator(params: MrLrcParams):
    """k x N generator: row t, column (i,j) is N_t(b~_i^(j)) * beta~_i^(j)."""
    F = params.field
    cols = []
    for i in range(1, params.g + 1):
        for j in range(params.group_size):
            nv = F.norms_vector(params.ext_locator(i, j), params.k)
            eb = params.ext_beta(i, j)
            cols.append([F.mul(x, eb) for x in nv])
    return [[col[t] for col in cols] for t in range(params.k)]


def is_maximally_recoverable(params: MrLrcParams, progress=None) -> bool:
    """Exhaustive check: erase any delta - 1 nodes in every group, then
    the surviving length-n code must be MDS (every k columns rank k).

    Cost is prod-over-groups C(r+delta-1, delta-1) patterns times
    C(n, k) submatrices; meant for desk-scale parameters only.
    """
    F = params.field
    G = global_generator(params)
    k, r, g = params.k, params.r, params.g
    size = params.group_size
    group_keeps = list(itertools.combinations(range(size), r))
    for keep_choice in itertools.product(group_keeps, repeat=g):
        cols = [phi_global(i + 1, j, r, params.delta)
                for i, keep in enumerate(keep_choice) for j in keep]
        punctured = [[row[c] for c in cols] for row in G]
        for subset in itertools.combinations(range(len(cols)), k):
            sub = [[row[c] for c in subset] for row in punctured]
            if rank(F, sub) != k:
                return False
        if progress is not None:
            progress(keep_choice)
    return True
