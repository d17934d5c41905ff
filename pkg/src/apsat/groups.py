"""Finite abelian groups given as products of cyclic factors.

Elements are stored as integer indices in ``[0, order)`` using a mixed-radix
code in which the first factor is the most significant digit. Coordinate
vectors are derived on demand. Every arithmetic method accepts either a
single index or a numpy array of indices and returns the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

import numpy as np


class GroupError(ValueError):
    """Malformed group description or element outside the group."""


class CoefficientError(GroupError):
    """A coefficient that cannot act on the ambient group."""


@dataclass(frozen=True)
class FieldScalar:
    """A scalar of GF(p^k), by its polynomial code (sum of c_i p^i).

    Only meaningful inside a :class:`~apsat.field.VectorSpace`; a plain group
    rejects it.
    """

    code: int

    def __str__(self) -> str:
        return f"gf:{self.code}"


Scalar = Union[Fraction, FieldScalar]


def as_coefficient(c) -> Scalar:
    if isinstance(c, (Fraction, FieldScalar)):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, str):
        c = c.strip()
        if c.startswith("gf:"):
            return FieldScalar(int(c[3:]))
        return Fraction(c)
    if isinstance(c, tuple) and len(c) == 2:
        return Fraction(int(c[0]), int(c[1]))
    raise CoefficientError(f"cannot interpret {c!r} as a coefficient")


def format_coefficient(c: Scalar) -> str:
    if isinstance(c, FieldScalar):
        return str(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Group:
    """Z_{m_1} x ... x Z_{m_k}."""

    def __init__(self, factors: Iterable[int]):
        factors = tuple(int(m) for m in factors)
        if not factors:
            raise GroupError("empty factor list")
        if any(m < 1 for m in factors):
            raise GroupError(f"cyclic orders must be >= 1, got {factors}")
        self.factors = factors
        self.order = math.prod(factors)
        self.exponent = math.lcm(*factors)
        radix = [1] * len(factors)
        for i in range(len(factors) - 2, -1, -1):
            radix[i] = radix[i + 1] * factors[i + 1]
        self.radix = tuple(radix)
        self._m = np.array(factors, dtype=np.int64)
        self._r = np.array(radix, dtype=np.int64)

    # -- identity -----------------------------------------------------------

    def _key(self):
        return ("group", self.factors)

    def __eq__(self, other):
        return isinstance(other, Group) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Group({list(self.factors)})"

    def __str__(self):
        return "x".join(f"Z{m}" for m in self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_cyclic_factor(self) -> bool:
        return len(self.factors) == 1

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def product(self, other: "Group") -> "Group":
        """Direct product; indices of the result are ``i * |other| + j``."""
        return Group(self.factors + other.factors)

    # -- codec --------------------------------------------------------------

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise GroupError(f"expected {len(self.factors)} coordinates, got {len(coords)}")
        idx = 0
        for c, m, r in zip(coords, self.factors, self.radix):
            c = int(c)
            if not 0 <= c < m:
                raise GroupError(f"coordinate {c} out of range for Z{m}")
            idx += c * r
        return idx

    def decode(self, index: int) -> tuple[int, ...]:
        index = int(index)
        if not 0 <= index < self.order:
            raise GroupError(f"index {index} out of range [0, {self.order})")
        return tuple((index // r) % m for m, r in zip(self.factors, self.radix))

    def coords(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._r) % self._m

    def index(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        return (coords % self._m * self._r).sum(axis=-1)

    # -- arithmetic ---------------------------------------------------------

    def add(self, x, y):
        if self.is_cyclic_factor:
            return _same((np.asarray(x) + np.asarray(y)) % self.order, x, y)
        return _same(self.index(self.coords(x) + self.coords(y)), x, y)

    def sub(self, x, y):
        if self.is_cyclic_factor:
            return _same((np.asarray(x) - np.asarray(y)) % self.order, x, y)
        return _same(self.index(self.coords(x) - self.coords(y)), x, y)

    def neg(self, x):
        return self.sub(0 if np.ndim(x) == 0 else np.zeros_like(x), x)

    def multiplier(self, c: Scalar) -> tuple[int, ...]:
        """Per-component integer that realises ``c`` on each cyclic factor.

        ``u/v`` acts on ``Z_m`` as multiplication by ``u * v^{-1} mod m``,
        which is the unique element x with ``v x = u g``.
        """
        if isinstance(c, FieldScalar):
            raise CoefficientError("field scalars need a vector-space ambient")
        c = as_coefficient(c)
        if math.gcd(c.denominator, self.exponent) != 1:
            raise CoefficientError(
                f"denominator {c.denominator} is not invertible in a group of exponent {self.exponent}"
            )
        return tuple(
            (c.numerator * pow(c.denominator, -1, m)) % m if m > 1 else 0 for m in self.factors
        )

    def check_coefficient(self, c: Scalar) -> None:
        """Raise unless ``c`` acts as a non-zero endomorphism."""
        mult = self.multiplier(c)
        if self.order > 1 and not any(mult):
            raise CoefficientError(f"coefficient {format_coefficient(c)} acts as the zero map on {self}")

    def is_invertible(self, c: Scalar) -> bool:
        try:
            mult = self.multiplier(c)
        except CoefficientError:
            return False
        return all(math.gcd(u, m) == 1 for u, m in zip(mult, self.factors))

    def scale(self, c: Scalar, x):
        mult = self.multiplier(c)
        if self.is_cyclic_factor:
            return _same(np.asarray(x, dtype=np.int64) * mult[0] % self.order, x)
        u = np.array(mult, dtype=np.int64)
        return _same(self.index(self.coords(x) * u), x)

    def combine(self, w: "WeightPair", a, b):
        """``lambda1 * a + lambda2 * b``."""
        return self.add(self.scale(w[0], a), self.scale(w[1], b))

    def is_identity_sum(self, w: "WeightPair") -> bool:
        """Whether ``lambda1 + lambda2`` acts as the identity (affine weights)."""
        l1, l2 = w
        if isinstance(l1, FieldScalar) or isinstance(l2, FieldScalar):
            return False
        s = l1 + l2
        try:
            return self.multiplier(s) == self.multiplier(Fraction(1))
        except CoefficientError:
            return False

    def element_order(self, x: int) -> int:
        return math.lcm(*(m // math.gcd(c, m) for c, m in zip(self.decode(x), self.factors)))


def _same(result, *inputs):
    """Return a Python int when every input was a scalar."""
    if all(np.ndim(v) == 0 for v in inputs):
        return int(result)
    return result


def make_group(factors: Iterable[int]) -> Group:
    return Group(factors)


def cyclic(m: int) -> Group:
    return Group([m])


# -- weights ------------------------------------------------------------------


class WeightPair(NamedTuple):
    lam1: Scalar
    lam2: Scalar

    def __str__(self):
        return f"({format_coefficient(self.lam1)},{format_coefficient(self.lam2)})"


@dataclass(frozen=True)
class WeightFamily:
    """A set of coefficient pairs. ``three_ap`` marks the 3-AP relation, which
    shares the (2,-1) avoidance condition but saturates through two clauses."""

    pairs: tuple[WeightPair, ...]
    name: str | None = None
    three_ap: bool = False

    def __post_init__(self):
        pairs = tuple(WeightPair(as_coefficient(a), as_coefficient(b)) for a, b in self.pairs)
        if not pairs:
            raise CoefficientError("a weight family needs at least one pair")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def of(cls, *pairs, name: str | None = None) -> "WeightFamily":
        return cls(tuple(pairs), name=name)

    def __iter__(self) -> Iterator[WeightPair]:
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        if self.name:
            return self.name
        return "{" + ", ".join(str(w) for w in self.pairs) + "}"

    def check(self, space: Group) -> None:
        if self.three_ap:
            # defined through 2x = y + z, meaningful in every abelian group
            return
        for l1, l2 in self.pairs:
            space.check_coefficient(l1)
            space.check_coefficient(l2)


THREE_AP = WeightFamily(((2, -1),), name="THREE_AP", three_ap=True)
TWO_MINUS_ONE = WeightFamily(((2, -1),), name="TWO_MINUS_ONE")
ONE_ONE = WeightFamily(((1, 1),), name="ONE_ONE")
ONE_MINUS_ONE = WeightFamily(((1, -1),), name="ONE_MINUS_ONE")
HALF_HALF = WeightFamily(((Fraction(1, 2), Fraction(1, 2)),), name="HALF_HALF")

PRESETS = {w.name: w for w in (THREE_AP, TWO_MINUS_ONE, ONE_ONE, ONE_MINUS_ONE, HALF_HALF)}


def single(l1, l2) -> WeightFamily:
    """Family with one pair, named like a preset when it matches one."""
    w = WeightPair(as_coefficient(l1), as_coefficient(l2))
    for preset in PRESETS.values():
        if not preset.three_ap and preset.pairs == (w,):
            return preset
    return WeightFamily((w,))


# -- point sets ---------------------------------------------------------------


class PointSet:
    """A subset of a group, held both as a sorted index array and a bitset."""

    __slots__ = ("group", "indices", "members")

    def __init__(self, group: Group, elements: Iterable[int] = ()):
        idx = np.unique(np.fromiter((int(e) for e in elements), dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= group.order):
            raise GroupError(f"element index out of range for {group}")
        self._freeze(group, idx)

    def _freeze(self, group, idx):
        members = np.zeros(group.order, dtype=bool)
        members[idx] = True
        idx.setflags(write=False)
        members.setflags(write=False)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "members", members)

    def __setattr__(self, key, value):
        raise AttributeError("PointSet is immutable")

    @classmethod
    def from_mask(cls, group: Group, mask: np.ndarray) -> "PointSet":
        ps = cls.__new__(cls)
        ps._freeze(group, np.flatnonzero(np.asarray(mask, dtype=bool)).astype(np.int64))
        return ps

    @classmethod
    def from_coords(cls, group: Group, points: Iterable[Sequence[int]]) -> "PointSet":
        return cls(group, (group.encode(p) for p in points))

    def __len__(self):
        return int(self.indices.size)

    def __iter__(self):
        return (int(i) for i in self.indices)

    def __contains__(self, x):
        return 0 <= int(x) < self.group.order and bool(self.members[int(x)])

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.group == other.group
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.group, self.indices.tobytes()))

    def __repr__(self):
        shown = self.to_list()
        if len(shown) > 12:
            shown = shown[:12] + ["..."]
        return f"PointSet({self.group}, {shown})"

    def to_list(self) -> list[int]:
        return [int(i) for i in self.indices]

    def to_coords(self) -> list[tuple[int, ...]]:
        return [self.group.decode(i) for i in self.indices]

    def complement(self) -> "PointSet":
        return PointSet.from_mask(self.group, ~self.members)

    def union(self, other: "PointSet") -> "PointSet":
        _same_group(self, other)
        return PointSet.from_mask(self.group, self.members | other.members)

    def issubset(self, other: "PointSet") -> bool:
        _same_group(self, other)
        return not np.any(self.members & ~other.members)


def _same_group(a: PointSet, b: PointSet) -> None:
    if a.group != b.group:
        raise GroupError(f"point sets live in different groups: {a.group} vs {b.group}")


def sumset(A: PointSet, B: PointSet, restricted: bool = False) -> PointSet:
    """``A + B``; with ``restricted`` only sums of distinct elements count."""
    _same_group(A, B)
    G = A.group
    if not len(A) or not len(B):
        return PointSet(G)
    a = A.indices[:, None]
    b = B.indices[None, :]
    sums = G.add(np.broadcast_to(a, (len(A), len(B))), np.broadcast_to(b, (len(A), len(B))))
    if restricted:
        sums = sums[a != b]
    mask = np.zeros(G.order, dtype=bool)
    mask[np.ravel(sums)] = True
    return PointSet.from_mask(G, mask)
