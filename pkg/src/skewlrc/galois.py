"""Exact arithmetic in GF(q) and its extension GF(q^m), q prime.

An element of GF(q^m) is a plain Python int in [0, q^m).  Its base-q
digits, least significant first, are the coordinates in the polynomial
basis 1, z, ..., z^(m-1) of GF(q)[z] / (modulus).  All semantics are
fixed by polynomial arithmetic modulo the modulus; log/antilog tables
over a primitive element are built lazily as a speedup for small fields
and the test suite checks them against the polynomial definition.

Only prime q is supported.  The fields this library actually touches
numerically are tiny (a few hundred elements), so everything here is
deliberately table-backed pure Python.
"""

from __future__ import annotations

import math
from functools import reduce

from .errors import ConstraintError

# largest field for which multiplication log tables are materialized
_TABLE_LIMIT = 1 << 16
# largest field for which the full addition table is materialized
_ADD_TABLE_LIMIT = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over GF(q), coefficient lists little-endian
# ---------------------------------------------------------------------------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_trim(out)


def _poly_mod(a, mod, q):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, q)
    while len(a) - 1 >= dm and a:
        _poly_trim(a)
        if len(a) - 1 < dm:
            break
        shift = len(a) - 1 - dm
        factor = (a[-1] * inv_lead) % q
        for i, c in enumerate(mod):
            a[i + shift] = (a[i + shift] - factor * c) % q
        _poly_trim(a)
    return a


def _poly_powmod(base, e, mod, q):
    result = [1]
    base = _poly_mod(base, mod, q)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, q), mod, q)
        base = _poly_mod(_poly_mul(base, base, q), mod, q)
        e >>= 1
    return result


def _poly_gcd(a, b, q):
    a, b = list(a), list(b)
    while b:
        a = _poly_mod(a, b, q)
        a, b = b, a
    return a


def is_irreducible(modulus: list[int], q: int) -> bool:
    """Irreducibility of a degree-m polynomial over GF(q).

    Uses the standard criterion: z^(q^m) == z mod f, and for every prime
    p dividing m, gcd(z^(q^(m/p)) - z, f) is constant.
    """
    m = len(modulus) - 1
    if m < 1 or modulus[-1] % q == 0:
        return False
    if m == 1:
        return True
    z = [0, 1]
    for p in prime_factors(m):
        t = _poly_powmod(z, q ** (m // p), modulus, q)
        # t - z
        diff = list(t) + [0] * max(0, 2 - len(t))
        diff[1] = (diff[1] - 1) % q
        g = _poly_gcd(modulus, _poly_trim(diff), q)
        if len(g) - 1 > 0:
            return False
    t = _poly_powmod(z, q ** m, modulus, q)
    diff = list(t) + [0] * max(0, 2 - len(t))
    diff[1] = (diff[1] - 1) % q
    return not _poly_trim(diff)


# pinned moduli for the (q, m) pairs the tests exercise; anything else is
# found by find_irreducible, which is deterministic too
IRREDUCIBLE_TABLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),        # z^2 + z + 1
    (2, 3): (1, 1, 0, 1),     # z^3 + z + 1
    (3, 2): (1, 0, 1),        # z^2 + 1
    (3, 3): (1, 2, 0, 1),     # z^3 + 2z + 1
    (5, 2): (2, 0, 1),        # z^2 + 2
    (5, 3): (1, 1, 0, 1),     # z^3 + z + 1
    (7, 2): (1, 0, 1),        # z^2 + 1
    (7, 3): (1, 1, 0, 1),     # z^3 + z + 1
}


def find_irreducible(q: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m over GF(q).

    "Smallest" means lexicographically smallest coefficient vector
    (constant term first) under the polynomial-basis enumeration order,
    so the result is reproducible across runs and platforms.
    """
    if m == 1:
        return (0, 1)
    for lower in range(q ** m):
        coeffs = []
        v = lower
        for _ in range(m):
            coeffs.append(v % q)
            v //= q
        cand = coeffs + [1]
        if is_irreducible(cand, q):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({q})")


class ExtField:
    """GF(q^m) with int-encoded elements.

    Parameters
    ----------
    q : prime base field size
    m : extension degree
    modulus : optional monic irreducible of degree m over GF(q),
        little-endian coefficients; looked up / searched if omitted.
    """

    def __init__(self, q: int, m: int, modulus=None):
        if not is_prime(q):
            raise ConstraintError(f"base field size q = {q} must be prime")
        if m < 1:
            raise ConstraintError(f"extension degree m = {m} must be >= 1")
        self.q = q
        self.m = m
        self.order = q ** m
        if modulus is None:
            modulus = IRREDUCIBLE_TABLE.get((q, m)) or find_irreducible(q, m)
        modulus = tuple(c % q for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ConstraintError("modulus must be monic of degree m")
        if not is_irreducible(list(modulus), q):
            raise ConstraintError(f"modulus {list(modulus)} is reducible over GF({q})")
        self.modulus = modulus
        # z^m = -(modulus without leading term), pre-reduced once
        self._zm = tuple((-c) % q for c in modulus[:m])
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add_table: list[int] | None = None
        self._frob_table: list[int] | None = None
        self.gamma = self._find_primitive()
        if self.order <= _TABLE_LIMIT:
            self._build_log_tables()
        if self.order <= _ADD_TABLE_LIMIT:
            self._build_add_table()

    def __repr__(self):
        return f"ExtField(q={self.q}, m={self.m}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return (isinstance(other, ExtField)
                and (self.q, self.m, self.modulus) == (other.q, other.m, other.modulus))

    def __hash__(self):
        return hash((self.q, self.m, self.modulus))

    # -- encoding ----------------------------------------------------------

    def coords(self, x: int) -> tuple[int, ...]:
        """Coordinates of x in the basis 1, z, ..., z^(m-1)."""
        self._check(x)
        out = []
        for _ in range(self.m):
            out.append(x % self.q)
            x //= self.q
        return tuple(out)

    def from_coords(self, vec) -> int:
        if len(vec) != self.m:
            raise ValueError(f"expected {self.m} coordinates, got {len(vec)}")
        x = 0
        for c in reversed(vec):
            x = x * self.q + (c % self.q)
        return x

    def elements(self):
        return range(self.order)

    def _check(self, x: int):
        if not (0 <= x < self.order):
            raise ValueError(f"{x} is not an element of GF({self.q}^{self.m})")

    # -- ring ops ----------------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self._add_table is not None:
            return self._add_table[x * self.order + y]
        return self._add_digits(x, y)

    def _add_digits(self, x: int, y: int) -> int:
        q = self.q
        out = 0
        place = 1
        for _ in range(self.m):
            out += ((x + y) % q) * place
            x //= q
            y //= q
            place *= q
        return out

    def neg(self, x: int) -> int:
        q = self.q
        out = 0
        place = 1
        for _ in range(self.m):
            out += ((-x) % q) * place
            x //= q
            place *= q
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self._exp is not None:
            if x == 0 or y == 0:
                return 0
            return self._exp[self._log[x] + self._log[y]]
        return self._polymul(x, y)

    def _polymul(self, x: int, y: int) -> int:
        """Ground-truth product: polynomial multiplication mod modulus."""
        q = self.q
        a = self.coords(x)
        b = self.coords(y)
        prod = [0] * (2 * self.m - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % q
        # reduce degrees >= m using z^m = self._zm, highest first
        for d in range(len(prod) - 1, self.m - 1, -1):
            c = prod[d]
            if c == 0:
                continue
            prod[d] = 0
            # z^d = z^(d-m) * z^m
            for i, zc in enumerate(self._zm):
                prod[d - self.m + i] = (prod[d - self.m + i] + c * zc) % q
        x = 0
        for c in reversed(prod[: self.m]):
            x = x * q + c
        return x

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        if self._exp is not None:
            return self._exp[(self.order - 1) - self._log[x]]
        return self.pow(x, self.order - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        if x == 0:
            return 0 if e else 1
        if self._exp is not None:
            return self._exp[(self._log[x] * e) % (self.order - 1)]
        result = 1
        base = x
        while e:
            if e & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            e >>= 1
        return result

    # -- automorphisms and norms --------------------------------------------

    def frobenius(self, x: int, t: int = 1) -> int:
        """sigma^t(x) where sigma(x) = x^q generates Gal(GF(q^m)/GF(q))."""
        t %= self.m
        if self._frob_table is None and self.order <= _TABLE_LIMIT:
            self._frob_table = [self.pow(v, self.q) for v in range(self.order)]
        out = x
        for _ in range(t):
            out = self._frob_table[out] if self._frob_table is not None else self.pow(out, self.q)
        return out

    def truncated_norm(self, x: int, i: int) -> int:
        """N_i(x) = sigma^(i-1)(x) * ... * sigma(x) * x, with N_0(x) = 1.

        Satisfies the recursion N_(i+1)(x) = sigma(N_i(x)) * x, which is
        how it is computed; equals x^((q^i - 1)/(q - 1)) and the tests
        pin that equivalence.
        """
        if i < 0:
            raise ValueError("truncated norm needs i >= 0")
        n = 1
        for _ in range(i):
            n = self.mul(self.frobenius(n), x)
        return n

    def norms_vector(self, x: int, count: int) -> list[int]:
        """[N_0(x), ..., N_(count-1)(x)] via the recursion, one pass."""
        out = []
        n = 1
        for _ in range(count):
            out.append(n)
            n = self.mul(self.frobenius(n), x)
        return out

    def field_norm(self, x: int) -> int:
        """Full norm N(x) = x^((q^m - 1)/(q - 1)), an element of GF(q)."""
        n = self.pow(x, (self.order - 1) // (self.q - 1))
        assert n < self.q or self.coords(n)[1:] == (0,) * (self.m - 1)
        return n

    # -- internals -----------------------------------------------------------

    def _find_primitive(self) -> int:
        """Smallest element (in int encoding order) of multiplicative order q^m - 1."""
        target = self.order - 1
        checks = [target // p for p in prime_factors(target)]
        for x in range(1, self.order):
            if all(self._pow_raw(x, c) != 1 for c in checks):
                return x
        raise AssertionError("no primitive element found")

    def _pow_raw(self, x, e):
        result = 1
        base = x
        while e:
            if e & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            e >>= 1
        return result

    def _build_log_tables(self):
        size = self.order - 1
        exp = [1] * (2 * size)
        log = [0] * self.order
        acc = 1
        for i in range(1, size):
            acc = self._polymul(acc, self.gamma)
            exp[i] = acc
            log[acc] = i
        if acc != 1:
            assert self._polymul(acc, self.gamma) == 1
        for i in range(size, 2 * size):
            exp[i] = exp[i - size]
        self._exp = exp
        self._log = log

    def _build_add_table(self):
        n = self.order
        table = [0] * (n * n)
        for x in range(n):
            base = x * n
            for y in range(x, n):
                s = self._add_digits(x, y)
                table[base + y] = s
                table[y * n + x] = s
        self._add_table = table

    # -- field-element vectors over GF(q) inside GF(q^m) ---------------------

    def lift(self, c: int) -> int:
        """Embed a base-field scalar c in [0, q) into GF(q^m)."""
        if not (0 <= c < self.q):
            raise ValueError(f"{c} is not a GF({self.q}) scalar")
        return c

    def random_element(self, rng) -> int:
        return rng.randrange(self.order)


def conjugacy_representatives(field: ExtField, g: int) -> list[int]:
    """gamma^0, ..., gamma^(g-1): one representative per conjugacy class.

    Elements with distinct full norms lie in distinct conjugacy classes,
    and successive powers of a primitive element have distinct norms as
    long as g <= q - 1, which is required here.
    """
    if not (1 <= g <= field.q - 1):
        raise ConstraintError(
            f"need 1 <= g <= q - 1 = {field.q - 1} (one conjugacy class per group), got g = {g}")
    reps = [field.pow(field.gamma, i) for i in range(g)]
    norms = [field.field_norm(a) for a in reps]
    assert len(set(norms)) == g, "representatives must have pairwise distinct norms"
    return reps


def dump_element(field: ExtField, x: int) -> str:
    """Coordinate-tuple text form, e.g. '(2,0,1)', for golden files."""
    return "(" + ",".join(str(c) for c in field.coords(x)) + ")"
