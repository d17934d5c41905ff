"""Constructions in cyclic groups: Singer sets, Mrose bases, the bijective
base-4 layers and the random saturating set."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..field import make_field
from ..groups import HALF_HALF, TWO_MINUS_ONE, Group, PointSet, cyclic
from ..predicates import complete, complete_three_ap, saturating, three_ap_saturating
from .records import ConstructionError, ConstructionRecord

# -- Singer difference sets ---------------------------------------------------


def singer(n: int) -> ConstructionRecord:
    """Singer (M, 2^n + 1, 1) difference set of Z_M, M = 4^n + 2^n + 1,
    translated so that doubling fixes it."""
    if not 1 <= n <= 5:
        raise ConstructionError("singer(n) is supported for 1 <= n <= 5")
    q = 2**n
    M = q * q + q + 1
    F = make_field(2, 3 * n)
    alpha = F.primitive
    base = [i for i in range(M) if F.trace(F.pow(alpha, i), n) == 0]
    for shift in range(M):
        D = sorted((d + shift) % M for d in base)
        if sorted(2 * d % M for d in D) == D:
            break
    else:
        raise ConstructionError(f"no translate of the Singer set of Z_{M} is fixed by doubling")
    return ConstructionRecord(
        "singer",
        {"n": n},
        cyclic(M),
        PointSet(cyclic(M), D),
        (complete(TWO_MINUS_ONE), complete_three_ap()),
        predicted_size=q + 1,
        notes={"M": M, "shift": shift, "trace_zero_set": base},
    )


def difference_counts(D: Sequence[int], M: int) -> np.ndarray:
    """How often each residue occurs as d - d' over ordered pairs d != d'."""
    D = np.asarray(D, dtype=np.int64)
    diff = (D[:, None] - D[None, :]) % M
    diff = diff[~np.eye(D.size, dtype=bool)]
    return np.bincount(diff, minlength=M)


# -- Mrose postage-stamp basis ------------------------------------------------


def mrose_blocks(t: int) -> list[int]:
    """Union of the five arithmetic blocks; 7t + 3 integers including 0."""
    if t < 1:
        raise ConstructionError("t must be >= 1")

    def block(a, step, b):
        return range(a, b + 1, step)

    blocks = [
        block(0, 1, t),
        block(2 * t, t, 3 * t * t + t),
        block(3 * t * t + 2 * t, t + 1, 4 * t * t + 2 * t - 1),
        block(6 * t * t + 4 * t, 1, 6 * t * t + 5 * t),
        block(10 * t * t + 7 * t, 1, 10 * t * t + 8 * t),
    ]
    return sorted({x for b in blocks for x in b})


def mrose_reach(t: int) -> int:
    """Largest r with [0, r] inside S + S (as guaranteed, not measured)."""
    return 14 * t * t + 10 * t - 1


def mrose_t_for(m: int) -> int:
    t = 1
    while mrose_reach(t) < m:
        t += 1
    return t


def mrose(t: int | None = None, modulus: int | None = None) -> ConstructionRecord:
    """Mrose set for parameter ``t``, or reduced into Z_m for odd ``modulus``.

    Without a modulus the integers are placed in Z_N with N > 2 max(S), so
    sums inside the group are the integer sums.
    """
    if modulus is None:
        if t is None:
            raise ConstructionError("give t or a modulus")
        S = mrose_blocks(t)
        N = 2 * S[-1] + 1
        G = cyclic(N)
        return ConstructionRecord(
            "mrose",
            {"t": t},
            G,
            PointSet(G, S),
            (),
            predicted_size=7 * t + 3,
            notes={"reach": mrose_reach(t), "ambient": f"integers embedded in Z{N}"},
        )
    if modulus < 1 or modulus % 2 == 0:
        raise ConstructionError("the modulus must be a positive odd integer")
    t = mrose_t_for(modulus)
    G = cyclic(modulus)
    S = PointSet(G, (s % modulus for s in mrose_blocks(t)))
    return ConstructionRecord(
        "mrose",
        {"modulus": modulus, "t": t},
        G,
        S,
        (saturating(HALF_HALF), three_ap_saturating()),
        notes={"reach": mrose_reach(t), "size_bound": math.sqrt(3.5 * modulus) + 8},
    )


# -- bijective base 4 ---------------------------------------------------------


def base4_encode(k: int) -> tuple[int, ...]:
    """Digits in {1, 2, 3, 4}, most significant first."""
    if k <= 0:
        raise ValueError("bijective base-4 needs a positive integer")
    digits = []
    while k:
        d = (k - 1) % 4 + 1
        digits.append(d)
        k = (k - d) // 4
    return tuple(reversed(digits))


def base4_decode(digits: Sequence[int]) -> int:
    if not digits:
        raise ValueError("empty digit string")
    k = 0
    for d in digits:
        if d not in (1, 2, 3, 4):
            raise ValueError(f"digit {d} is not in {{1, 2, 3, 4}}")
        k = 4 * k + d
    return k


def layer_H(l: int) -> list[int]:
    """Integers with l digits, all in {2, 3}; layer 0 is {0}."""
    if l < 0:
        raise ValueError("layer index must be >= 0")
    H = [0]
    for _ in range(l):
        H = [4 * h + v for h in H for v in (2, 3)]
    return sorted(H)


def layer_K(l: int) -> tuple[int, int]:
    """Closed interval of integers with exactly l bijective base-4 digits."""
    return (4**l - 1) // 3, 4 * (4**l - 1) // 3


def base4_layers(l: int) -> tuple[list[int], tuple[int, int]]:
    return layer_H(l), layer_K(l)


TABLE_DIGITS = {1: (2, 3), 2: (2, 2), 3: (3, 3), 4: (3, 2)}
"""digit k_i of the target -> digits (a_i, b_i) with k_i = 2 a_i - b_i."""


def digit_pair(k: int) -> tuple[int, int]:
    """The pair (a, b) in H_t x H_t with k = 2a - b for k with t digits."""
    a = b = 0
    for d in base4_encode(k):
        ai, bi = TABLE_DIGITS[d]
        a, b = 4 * a + ai, 4 * b + bi
    return a, b


def gyok3_case(m: int) -> tuple[int, int]:
    """(n, case) with 4^(n-1) < m <= 4^n."""
    if m < 2:
        raise ConstructionError("m must be >= 2")
    n = 1
    while 4**n < m:
        n += 1
    if m == 4**n:
        return n, 2
    if (4**n - 1) // 3 + 1 <= m:
        return n, 3
    return n, 4


def gyok3_set(m: int) -> ConstructionRecord:
    """Layer set H_n (or a union of layers) reduced mod m, by the case of m."""
    if m == 2:
        # 2 acts as the zero map on Z_2, so (2,-1) is not a valid weight there
        raise ConstructionError("m = 2 admits no (2,-1) weight")
    n, case = gyok3_case(m)
    G = cyclic(m)
    params: dict = {"m": m, "n": n, "case": case}
    two_thirds = 2 * (4**n - 1) // 3
    if case == 2:
        S = layer_H(n)
        claim = complete(TWO_MINUS_ONE)
    elif case == 3:
        lo, hi = layer_K(n)
        x = max(lo, 4**n - m)
        assert x + m - 1 <= hi
        params["interval"] = (x, x + m - 1)
        S = layer_H(n)
        claim = complete(TWO_MINUS_ONE) if m > two_thirds else saturating(TWO_MINUS_ONE)
    else:
        k = max(j for j in range(1, n) if 3 * m <= 4**n - 4 ** (j - 1))
        start = (4 ** (k - 1) - 1) // 3
        params["k"] = k
        params["interval"] = (start, start + m - 1)
        S = sorted({h for j in range(k - 1, n) for h in layer_H(j)})
        claim = saturating(TWO_MINUS_ONE)
    points = PointSet(G, (s % m for s in S))
    return ConstructionRecord(
        "gyok3",
        params,
        G,
        points,
        (claim,),
        predicted_size=len(S),
        notes={"sqrt_3m": math.sqrt(3 * m)},
    )


# -- random saturating set ----------------------------------------------------


def random_bound(n: int) -> float:
    return math.sqrt((n - 1) * math.log(n - 1)) + math.sqrt(n - 1) + 1


def random_saturating(G: Group, seed: int = 0) -> ConstructionRecord:
    """H0 random with density sqrt(ln(n-1)/(n-1)), then add every element that
    H0 fails to put in a 3-AP."""
    n = G.order
    if n <= 5 or n % 2 == 0:
        raise ConstructionError("random saturation needs odd |G| > 5")
    p = math.sqrt(math.log(n - 1) / (n - 1))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    h0 = np.flatnonzero(rng.random(n) < p)
    a = np.repeat(h0, h0.size)
    b = np.tile(h0, h0.size)
    keep = a != b
    a, b = a[keep], b[keep]
    reached = np.zeros(n, dtype=bool)
    if a.size:
        reached[G.sub(G.scale(2, a), b)] = True
        reached[G.scale(((n + 1) // 2), G.add(a, b))] = True  # 2g = a + b, n odd
    mask = ~reached
    mask[h0] = True
    return ConstructionRecord(
        "random",
        {"group": list(G.factors)},
        G,
        PointSet.from_mask(G, mask),
        (three_ap_saturating(),),
        seed=seed,
        notes={"density": p, "h0_size": int(h0.size), "bound": random_bound(n)},
    )
