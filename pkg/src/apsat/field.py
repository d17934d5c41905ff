"""GF(p^k) arithmetic and vector spaces over it.

Field elements are integers: the polynomial c_0 + c_1 x + ... + c_{k-1} x^{k-1}
has code sum(c_i p^i). The modulus is the monic irreducible polynomial of degree k
with the smallest code (x^3 + x + 1 for GF(8), x^2 + 1 for GF(9)) and the
primitive element is the smallest code of multiplicative order p^k - 1, so
every table below is reproducible across runs.

A vector of dimension n over GF(p^k) is embedded in Z_p^{kn} by concatenating
the coefficient vectors of its coordinates (low to high), which gives the
group index used everywhere else in the package.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .groups import FieldScalar, Group, GroupError, Scalar, WeightFamily, as_coefficient


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division."""
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, m: int) -> int:
    """Order of ``a`` in (Z/mZ)^*."""
    a %= m
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    phi = m
    for r in prime_factors(m):
        phi = phi // r * (r - 1)
    order = phi
    for r in prime_factors(phi):
        while order % r == 0 and pow(a, order // r, m) == 1:
            order //= r
    return order


# -- polynomials over F_p, coefficient lists low to high ---------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg/2 divides ``poly``."""
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(poly, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    # ascending integer code: the highest non-leading coefficient varies slowest
    for high_first in itertools.product(range(p), repeat=k):
        low = high_first[::-1]
        if low[0] == 0:
            continue
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


class Field:
    """GF(p^k) with log/antilog tables over the canonical primitive element."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        self.p, self.k, self.q = p, k, p**k
        self.modulus = smallest_irreducible(p, k)
        self.primitive = self._find_primitive()
        q = self.q
        exp = np.zeros(2 * (q - 1) if q > 1 else 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, self.primitive)
        exp[q - 1 :] = exp[: q - 1]
        self._exp, self._log = exp, log
        # digit-reversed index of each code inside its Z_p^k block
        codes = np.arange(q, dtype=np.int64)
        blk = np.zeros(q, dtype=np.int64)
        for j in range(k):
            blk += (codes // p**j) % p * p ** (k - 1 - j)
        self.code_to_block = blk
        self.block_to_code = np.argsort(blk)

    def __repr__(self):
        return f"Field({self.p}, {self.k})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("field", self.p, self.k))

    # -- codec --------------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        if not 0 <= x < self.q:
            raise FieldError(f"code {x} outside GF({self.q})")
        return tuple((x // self.p**j) % self.p for j in range(self.k))

    def element(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        if len(coeffs) > self.k or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"bad coefficient vector {coeffs} for GF({self.q})")
        return sum(c * self.p**j for j, c in enumerate(coeffs))

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    # -- arithmetic ---------------------------------------------------------

    def _mul_poly(self, x: int, y: int) -> int:
        prod = poly_mul(list(self.coeffs(x)), list(self.coeffs(y)), self.p)
        return self.element(poly_mod(prod, self.modulus, self.p))

    def _find_primitive(self) -> int:
        q = self.q
        if q == 2:
            return 1
        rs = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_poly(g, (q - 1) // r) != 1 for r in rs):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    def _pow_poly(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self.element([(a + b) % self.p for a, b in zip(self.coeffs(x), self.coeffs(y))])

    def neg(self, x: int) -> int:
        return self.element([(-a) % self.p for a in self.coeffs(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self._exp[self._log[x] + self._log[y]])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a field")
        return int(self._exp[(self.q - 1 - self._log[x]) % (self.q - 1)])

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return int(self._exp[(self._log[x] * e) % (self.q - 1)])

    def arith(self, op: str, x: int, y: int) -> int:
        """Dispatch for ``add``, ``mul``, ``inv`` and ``pow`` by name."""
        if op == "add":
            return self.add(x, y)
        if op == "mul":
            return self.mul(x, y)
        if op == "inv":
            return self.inv(x)
        if op == "pow":
            return self.pow(x, y)
        raise FieldError(f"unknown field operation {op!r}")

    def order(self, x: int) -> int:
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        return (self.q - 1) // math.gcd(int(self._log[x]), self.q - 1)

    def trace(self, x: int, h: int = 1) -> int:
        """Trace down to GF(p^h): sum of x^(p^(h i)) for i < k/h."""
        if h < 1 or self.k % h:
            raise FieldError(f"subfield degree {h} does not divide {self.k}")
        total, y = 0, x
        for _ in range(self.k // h):
            total = self.add(total, y)
            y = self.pow(y, self.p**h)
        return total

    def is_square(self, x: int) -> bool:
        if x == 0 or self.p == 2:
            return True
        return self.pow(x, (self.q - 1) // 2) == 1

    def in_subfield(self, x: int, h: int) -> bool:
        return self.pow(x, self.p**h) == x

    def mul_table(self, lam: int) -> np.ndarray:
        """``block -> block`` permutation (or zero map) for multiplication by ``lam``."""
        codes = self.block_to_code
        if lam == 0:
            return np.zeros(self.q, dtype=np.int64)
        logs = self._log[codes]
        out = np.where(codes == 0, 0, self._exp[(logs + self._log[lam]) % (self.q - 1)])
        return self.code_to_block[out]


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> Field:
    return Field(p, k)


def to_group(field: Field, vector: Sequence[int]) -> int:
    """Index of a vector over GF(p^k) in Z_p^{k * len(vector)}."""
    idx = 0
    for c in vector:
        idx = idx * field.q + int(field.code_to_block[c])
    return idx


def from_group(field: Field, index: int, dim: int) -> tuple[int, ...]:
    out = []
    for _ in range(dim):
        index, b = divmod(index, field.q)
        out.append(int(field.block_to_code[b]))
    return tuple(reversed(out))


class VectorSpace(Group):
    """GF(p^k)^n viewed as the elementary abelian group Z_p^{kn}.

    Rational coefficients act through the prime subfield exactly as on the
    underlying group; :class:`FieldScalar` coefficients use the field
    multiplication on every coordinate.
    """

    def __init__(self, field: Field, dim: int):
        if dim < 1:
            raise GroupError("vector space dimension must be >= 1")
        super().__init__([field.p] * (field.k * dim))
        self.field = field
        self.dim = dim
        self._tables: dict[int, np.ndarray] = {}

    def _key(self):
        return ("space", self.field.p, self.field.k, self.dim)

    def __repr__(self):
        return f"VectorSpace(GF({self.field.p}^{self.field.k}), {self.dim})"

    def __str__(self):
        return f"F{self.field.p}^{self.field.k}:{self.dim}"

    @property
    def q(self) -> int:
        return self.field.q

    def point(self, vector: Sequence[int]) -> int:
        if len(vector) != self.dim:
            raise GroupError(f"expected a vector of length {self.dim}")
        return to_group(self.field, vector)

    def vector(self, index: int) -> tuple[int, ...]:
        if not 0 <= int(index) < self.order:
            raise GroupError(f"index {index} out of range")
        return from_group(self.field, int(index), self.dim)

    def _scalar_code(self, c: Scalar) -> int:
        if isinstance(c, FieldScalar):
            if not 0 <= c.code < self.q:
                raise GroupError(f"{c} is not an element of GF({self.q})")
            return c.code
        c = as_coefficient(c)
        p = self.field.p
        if c.denominator % p == 0:
            raise GroupError(f"denominator {c.denominator} not invertible in characteristic {p}")
        return self.field.from_int(c.numerator * pow(c.denominator, -1, p))

    def check_coefficient(self, c: Scalar) -> None:
        if self._scalar_code(c) == 0:
            raise GroupError(f"coefficient {c} is zero in GF({self.q})")

    def is_invertible(self, c: Scalar) -> bool:
        try:
            return self._scalar_code(c) != 0
        except GroupError:
            return False

    def scale(self, c: Scalar, x):
        if not isinstance(c, FieldScalar):
            return super().scale(c, x)
        code = self._scalar_code(c)
        table = self._tables.get(code)
        if table is None:
            table = self._tables[code] = self.field.mul_table(code)
        arr = np.asarray(x, dtype=np.int64)
        q = self.q
        out = np.zeros_like(arr)
        rest = arr.copy()
        weight = 1
        for _ in range(self.dim):
            rest, digit = np.divmod(rest, q)
            out += table[digit] * weight
            weight *= q
        return int(out) if np.ndim(x) == 0 else out

    def is_identity_sum(self, w) -> bool:
        l1, l2 = (self._scalar_code(c) for c in w)
        return self.field.add(l1, l2) == 1


def as_vector_space(G: Group) -> VectorSpace:
    """View an elementary abelian group Z_p^n as F_p^n."""
    if isinstance(G, VectorSpace):
        return G
    ps = set(G.factors)
    if len(ps) != 1 or not is_prime(next(iter(ps))):
        raise GroupError(f"{G} is not an elementary abelian p-group")
    return VectorSpace(make_field(next(iter(ps)), 1), G.rank)


def line_family(field: Field) -> WeightFamily:
    """{(lam, 1 - lam) : lam in GF(q) minus {0, 1}}: collinearity in AG(n, q)."""
    if field.q < 3:
        raise FieldError("the line family is empty over GF(2)")
    pairs = []
    for lam in range(2, field.q):
        other = field.sub(1, lam)
        if field.k == 1:
            pairs.append((Fraction(lam), Fraction(other)))
        else:
            pairs.append((FieldScalar(lam), FieldScalar(other)))
    return WeightFamily(tuple(pairs), name=f"LINE_FAMILY({field.q})")


def order_of_minus_two(field: Field) -> int:
    """o_q(-2); equal to the order of -2 mod p since -2 lies in the prime field."""
    return field.order(field.from_int(-2))
