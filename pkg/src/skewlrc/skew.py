"""Skew polynomials over GF(q^m) with the Frobenius twist, plus the
exact linear algebra the rest of the package runs on.

The ring is GF(q^m)[x; sigma] with sigma(a) = a^q and commutation rule
x * a = sigma(a) * x.  Evaluation at b is the truncated-norm form

    f(b) = sum_i f_i * N_i(b),

equivalent to taking the remainder of f under right division by (x - b).
Two consequences used everywhere:

    (c * f)(b) = c * f(b)            (left scaling)
    (x * f)(b) = sigma(f(b)) * b     (left shift)

A locator multiset is "P-independent" exactly when its sigma-Vandermonde
matrix (entry (i, j) = N_i(b_j)) has full column rank; interpolation is
unique below degree n on n such points.

Matrices are lists of row lists of int-encoded field elements.  Pivoting
is deterministic: first nonzero entry in column order, so reduced forms
are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SelectionError
from .galois import ExtField

NEG_INF = float("-inf")


@dataclass(frozen=True)
class SkewPoly:
    """Coefficients low degree first, trailing zeros trimmed."""

    field: ExtField
    coeffs: tuple[int, ...]

    @staticmethod
    def make(field: ExtField, coeffs) -> "SkewPoly":
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return SkewPoly(field, tuple(coeffs))

    @staticmethod
    def zero(field: ExtField) -> "SkewPoly":
        return SkewPoly(field, ())

    @staticmethod
    def constant(field: ExtField, c: int) -> "SkewPoly":
        return SkewPoly.make(field, [c])

    @staticmethod
    def monomial(field: ExtField, degree: int, c: int = 1) -> "SkewPoly":
        return SkewPoly.make(field, [0] * degree + [c])

    @property
    def degree(self):
        """Degree, with deg(0) = -inf so degree comparisons always work."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        assert self.field == other.field, "operands live in different fields"
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly.make(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "SkewPoly":
        F = self.field
        return SkewPoly(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def scale_left(self, c: int) -> "SkewPoly":
        """c * f; satisfies (c f)(b) = c * f(b)."""
        F = self.field
        if c == 0:
            return SkewPoly.zero(F)
        return SkewPoly(F, tuple(F.mul(c, a) for a in self.coeffs))

    def shift_left(self) -> "SkewPoly":
        """x * f; coefficients Frobenius-twisted up one degree."""
        F = self.field
        if self.is_zero():
            return self
        return SkewPoly(F, (0,) + tuple(F.frobenius(c) for c in self.coeffs))

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        """Product under x * a = sigma(a) * x."""
        assert self.field == other.field, "operands live in different fields"
        F = self.field
        if self.is_zero() or other.is_zero():
            return SkewPoly.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, fi in enumerate(self.coeffs):
            if fi == 0:
                continue
            for j, hj in enumerate(other.coeffs):
                if hj == 0:
                    continue
                out[i + j] = F.add(out[i + j], F.mul(fi, F.frobenius(hj, i)))
        return SkewPoly.make(F, out)

    def __call__(self, b: int) -> int:
        return skew_eval(self, b)


def skew_eval(f: SkewPoly, b: int) -> int:
    """f(b) = sum_i f_i N_i(b), N the truncated norm."""
    F = f.field
    acc = 0
    n = 1
    for i, c in enumerate(f.coeffs):
        if i:
            n = F.mul(F.frobenius(n), b)
        if c:
            acc = F.add(acc, F.mul(c, n))
    return acc


# ---------------------------------------------------------------------------
# exact linear algebra over GF(q^m)
# ---------------------------------------------------------------------------

def mat_mul(field: ExtField, A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        Oi = out[i]
        for t in range(inner):
            a = Ai[t]
            if a == 0:
                continue
            Bt = B[t]
            for j in range(cols):
                if Bt[j]:
                    Oi[j] = field.add(Oi[j], field.mul(a, Bt[j]))
    return out


def mat_vec(field: ExtField, A, v):
    return [row_dot(field, row, v) for row in A]


def row_dot(field: ExtField, u, v):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = field.add(acc, field.mul(a, b))
    return acc


def rank(field: ExtField, M) -> int:
    """Row rank by Gaussian elimination, first-nonzero pivoting."""
    if not M:
        return 0
    A = [row[:] for row in M]
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = field.inv(A[r][c])
        A[r] = [field.mul(inv, a) for a in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [field.sub(a, field.mul(f, p)) for a, p in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def mat_inv(field: ExtField, M):
    """Inverse by Gauss-Jordan; raises on singular input."""
    n = len(M)
    A = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if A[i][c] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[pivot] = A[pivot], A[c]
        inv = field.inv(A[c][c])
        A[c] = [field.mul(inv, a) for a in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [field.sub(a, field.mul(f, p)) for a, p in zip(A[i], A[c])]
    return [row[n:] for row in A]


def solve_right(field: ExtField, A, y):
    """One solution x of A x = y for square invertible A."""
    return mat_vec(field, mat_inv(field, A), y)


# ---------------------------------------------------------------------------
# sigma-Vandermonde systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaVandermonde:
    field: ExtField
    locators: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]  # entries[i][j] = N_i(locators[j])

    def as_rows(self):
        return [list(r) for r in self.entries]


def sigma_vandermonde(field: ExtField, locators, nrows: int | None = None) -> SigmaVandermonde:
    """Matrix with entry (i, j) = N_i(b_j), i < nrows (default len(locators))."""
    locators = tuple(locators)
    n = len(locators) if nrows is None else nrows
    cols = [field.norms_vector(b, n) for b in locators]
    entries = tuple(tuple(col[i] for col in cols) for i in range(n))
    assert n == 0 or all(e == 1 for e in entries[0])
    return SigmaVandermonde(field, locators, entries)


def is_p_independent(field: ExtField, locators) -> bool:
    """Full column rank of the square sigma-Vandermonde on the locators."""
    locators = tuple(locators)
    if len(set(locators)) != len(locators):
        return False
    V = sigma_vandermonde(field, locators)
    return rank(field, V.as_rows()) == len(locators)


def eval_transform(field: ExtField, f: SkewPoly, locators) -> list[int]:
    """Coefficient-to-evaluation map: [f(b) for b in locators].

    Equals the vector-matrix product (f_0 .. f_(n-1)) V, with V the
    sigma-Vandermonde on the locators; the tests pin that identity.
    """
    return [skew_eval(f, b) for b in locators]


def newton_interpolate(field: ExtField, points) -> SkewPoly:
    """Unique f with deg f < n and f(b_t) = v_t on n P-independent points.

    Incremental Newton form: maintain the current interpolant f and an
    annihilator Z vanishing on the processed locators, then

        f  <- f + c Z           with c = (v - f(b)) / Z(b)
        Z  <- (x - sigma(z) b / z) Z      with z = Z(b)

    using only left scaling and left shift, both of which interact with
    evaluation linearly.  A zero Z(b) on a fresh point means the locators
    were not P-independent.
    """
    F = field
    f = SkewPoly.zero(F)
    Z = SkewPoly.constant(F, 1)
    for b, v in points:
        z = skew_eval(Z, b)
        if z == 0:
            raise SelectionError("locators are not P-independent; re-select evaluation points")
        e = F.sub(v, skew_eval(f, b))
        if e != 0:
            f = f + Z.scale_left(F.div(e, z))
        # (x - sigma(z) b z^-1) Z vanishes on the old points and on b
        d = F.mul(F.frobenius(z), F.div(b, z))
        Z = Z.shift_left() - Z.scale_left(d)
    return f


def interpolate_by_elimination(field: ExtField, points) -> SkewPoly:
    """Same contract as newton_interpolate via solving f V = values.

    Kept as an independent oracle for the test suite rather than a code
    path the simulator depends on.
    """
    locators = [b for b, _ in points]
    values = [v for _, v in points]
    V = sigma_vandermonde(field, locators).as_rows()
    try:
        Vinv = mat_inv(field, V)
    except ZeroDivisionError:
        raise SelectionError("locators are not P-independent; re-select evaluation points")
    # f V = values  =>  f = values V^-1
    coeffs = [row_dot(field, values, [Vinv[t][j] for t in range(len(values))])
              for j in range(len(values))]
    return SkewPoly.make(field, coeffs)


def lagrange_basis(field: ExtField, locators) -> list[SkewPoly]:
    """Basis polys l_i with l_i(b_j) = delta_ij, degrees < n.

    Row i of the inverse sigma-Vandermonde holds the coefficients of l_i.
    """
    # coefficients of l_i solve l_i V = e_i, so l_i is row i of V^-1
    return [SkewPoly.make(field, row) for row in lagrange_coefficient_matrix(field, locators)]


def lagrange_coefficient_matrix(field: ExtField, locators):
    """Matrix L with L[i][j] = coefficient j of l_i; equals inverse of V."""
    V = sigma_vandermonde(field, locators).as_rows()
    try:
        return mat_inv(field, V)
    except ZeroDivisionError:
        raise SelectionError("locators are not P-independent; re-select evaluation points")


def expansion_row(field: ExtField, L, b: int) -> list[int]:
    """[l_0(b), ..., l_(k-1)(b)] given the coefficient matrix L.

    This is the row expressing f(b) as a combination of the f(b_j) on the
    interpolation points: f(b) = sum_j l_j(b) f(b_j).  When b is one of
    the points the row is the corresponding unit vector.
    """
    k = len(L)
    norms = field.norms_vector(b, k)
    return [row_dot(field, L[i], norms) for i in range(k)]


def dump_matrix(field: ExtField, M) -> str:
    """Plain-text grid of coordinate tuples, one matrix row per line."""
    from .galois import dump_element
    return "\n".join(" ".join(dump_element(field, x) for x in row) for row in M)


def dump_poly(field: ExtField, f: SkewPoly) -> str:
    from .galois import dump_element
    if f.is_zero():
        return "(zero)"
    return " ".join(dump_element(field, c) for c in f.coeffs)
