"""Point sets in F_q x F_q and in direct products A x B.

The parabola gives small complete 3-AP-free sets when -2 is a non-square. The
axis constructions put points on the two coordinate axes and remove, inside
each orbit of multiplication by -2, a set chosen so that no element is -2 or 4
times another removed element (or only -2 times, for the starred variant).
"""

from __future__ import annotations

import enum
import math

from ..field import Field, VectorSpace, order_of_minus_two
from ..groups import TWO_MINUS_ONE, Group, PointSet
from ..predicates import Kind, Predicate, saturating, three_ap_saturating
from .records import ConstructionError, ConstructionRecord


class Variant(enum.Enum):
    TRIPLE = "TRIPLE"
    PAIR = "PAIR"


def parabola(field: Field) -> ConstructionRecord:
    """{(x, x^2) : x in F_q} inside F_q^2."""
    if field.p == 2:
        raise ConstructionError("the parabola construction needs odd q")
    space = VectorSpace(field, 2)
    points = PointSet(space, (space.point((x, field.mul(x, x))) for x in range(field.q)))
    minus_two_square = field.is_square(field.from_int(-2))
    if minus_two_square:
        claims = (Predicate(Kind.THREE_AP_FREE), Predicate(Kind.SIDON))
    else:
        claims = (Predicate(Kind.COMPLETE_THREE_AP), Predicate(Kind.SIDON))
    return ConstructionRecord(
        "parabola",
        {"p": field.p, "k": field.k},
        space,
        points,
        claims,
        predicted_size=field.q,
        notes={"minus_two_is_square": minus_two_square},
    )


def minus_two_orbits(G: Group) -> list[list[int]]:
    """Orbits g, -2g, 4g, ... of the non-zero elements, in discovery order.

    Each orbit starts at its smallest index; orbits are listed by that index.
    """
    if math.gcd(G.order, 6) != 1:
        raise ConstructionError(f"multiplication by -2 needs gcd(|G|, 6) = 1, got |G| = {G.order}")
    seen = [False] * G.order
    orbits = []
    for g in range(1, G.order):
        if seen[g]:
            continue
        orbit, x = [], g
        while not seen[x]:
            seen[x] = True
            orbit.append(x)
            x = G.scale(-2, x)
        orbits.append(orbit)
    return orbits


def orbit_avoider(G: Group, variant: Variant = Variant.TRIPLE) -> PointSet:
    """R (TRIPLE) or R* (PAIR) as a point set of ``G``.

    In an orbit of length o, TRIPLE keeps the exponents 2, 5, 8, ... below
    3*floor(o/3) and PAIR keeps the odd exponents below 2*floor(o/2). Both are
    maximum independent sets of the relevant circulant graph on the orbit.
    """
    chosen = []
    for orbit in minus_two_orbits(G):
        o = len(orbit)
        if variant is Variant.TRIPLE:
            chosen += [orbit[e] for e in range(2, 3 * (o // 3), 3)]
        else:
            chosen += [orbit[e] for e in range(1, 2 * (o // 2), 2)]
    return PointSet(G, chosen)


def lines_size(q: int, o: int, variant: Variant) -> int:
    if variant is Variant.TRIPLE:
        return 2 * (q - 1) * (o - o // 3) // o
    return 2 * (q - 1) - (q - 1) * (o // 2) // o


def lines_construction(field: Field, star: bool = False) -> ConstructionRecord:
    """L (3-AP saturating) or L* ((2,-1)-saturating) on the axes of F_q^2."""
    if field.p in (2, 3):
        raise ConstructionError("the axis construction needs characteristic other than 2 and 3")
    q = field.q
    line = VectorSpace(field, 1)
    space = VectorSpace(field, 2)
    o = order_of_minus_two(field)
    if star:
        excluded = orbit_avoider(line, Variant.PAIR)
        second = [r for r in range(1, q) if r not in excluded]
        first = list(range(1, q))
        claims = (saturating(TWO_MINUS_ONE), three_ap_saturating())
        variant = Variant.PAIR
    else:
        excluded = orbit_avoider(line, Variant.TRIPLE)
        first = second = [r for r in range(1, q) if r not in excluded]
        claims = (three_ap_saturating(),)
        variant = Variant.TRIPLE
    # (r, 0) has index r * q and (0, r) has index r
    points = PointSet(space, [r * q for r in first] + list(second))
    r = o % 3
    return ConstructionRecord(
        "lines-star" if star else "lines",
        {"p": field.p, "k": field.k},
        space,
        points,
        claims,
        predicted_size=lines_size(q, o, variant),
        notes={
            "order_of_minus_two": o,
            "excluded": excluded.to_list(),
            # closed-form upper bound on |L|, kept for comparison only
            "stated_bound": (4 / 3 + r / (3 * o)) * (q - 1),
        },
    )


def axes_product(A: Group, B: Group, star: bool = False) -> ConstructionRecord:
    """Axis construction in A x B for general abelian groups."""
    a, b = A.order, B.order
    if a == 1 or b == 1:
        # with a trivial factor the set lives on one axis and need not saturate
        raise ConstructionError("both factors must be non-trivial")
    if star:
        if a % 2 == 0 or math.gcd(b, 6) != 1:
            raise ConstructionError("the starred product needs |A| odd and gcd(|B|, 6) = 1")
    elif math.gcd(a * b, 6) != 1:
        raise ConstructionError("the product construction needs gcd(|A||B|, 6) = 1")
    G = A.product(B)
    if star:
        excl_b = orbit_avoider(B, Variant.PAIR)
        first = list(range(1, a))
        lo, hi = a + b / 2 - 1.5, a + 3 * b / 5 - 1.6
        claims = (saturating(TWO_MINUS_ONE), three_ap_saturating())
    else:
        excl_a = orbit_avoider(A, Variant.TRIPLE)
        excl_b = orbit_avoider(B, Variant.TRIPLE)
        first = [r for r in range(1, a) if r not in excl_a]
        lo, hi = 2 * (a + b - 2) / 3, 4 * (a + b - 2) / 5
        claims = (three_ap_saturating(),)
    second = [r for r in range(1, b) if r not in excl_b]
    points = PointSet(G, [r * b for r in first] + second)
    return ConstructionRecord(
        "axes-star" if star else "axes",
        {"A": list(A.factors), "B": list(B.factors)},
        G,
        points,
        claims,
        notes={"size_bounds": (lo, hi)},
    )
