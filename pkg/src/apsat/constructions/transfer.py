"""Operations that build new avoiding or saturating sets from old ones:
direct products, affine images and composition along a subgroup."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..field import VectorSpace
from ..groups import (
    HALF_HALF,
    ONE_MINUS_ONE,
    ONE_ONE,
    THREE_AP,
    TWO_MINUS_ONE,
    FieldScalar,
    Group,
    PointSet,
    Scalar,
    WeightFamily,
    as_coefficient,
    cyclic,
    single,
)
from ..predicates import (
    Predicate,
    avoiding,
    complete,
    saturating,
    three_ap_free,
    verify_avoiding,
    verify_saturating,
)
from .records import ConstructionRecord, HypothesisError


class ProductMode(enum.Enum):
    AP_FREE = "AP_FREE"
    ONE_ONE_AVOID = "ONE_ONE_AVOID"
    W_AVOID_LINE = "W_AVOID_LINE"
    W_SAT = "W_SAT"
    TWOMINUS_OR_HALF_SAT = "TWOMINUS_OR_HALF_SAT"
    HALF_HALF_VIA_DOUBLING = "HALF_HALF_VIA_DOUBLING"
    ONE_MINUS_ONE_SAT = "ONE_MINUS_ONE_SAT"


def product_space(G1: Group, G2: Group) -> Group:
    if isinstance(G1, VectorSpace) and isinstance(G2, VectorSpace) and G1.field == G2.field:
        return VectorSpace(G1.field, G1.dim + G2.dim)
    return G1.product(G2)


def cartesian(H1: PointSet, H2: PointSet, space: Group | None = None) -> PointSet:
    space = space or product_space(H1.group, H2.group)
    n2 = H2.group.order
    idx = (H1.indices[:, None] * n2 + H2.indices[None, :]).ravel()
    return PointSet(space, idx)


def _require(ok: bool, hypothesis: str, detail: str = "") -> None:
    if not ok:
        raise HypothesisError(hypothesis, detail)


def _no_involutions(H: PointSet) -> bool:
    """ord(x - y) > 2 for all distinct x, y in H."""
    G = H.group
    if G.order % 2:
        return True
    idx = H.indices
    for i, x in enumerate(idx):
        for y in idx[i + 1:]:
            if G.element_order(G.sub(int(x), int(y))) <= 2:
                return False
    return True


def _avoids(H: PointSet, W: WeightFamily) -> bool:
    return verify_avoiding(H.group, H, W).holds


def _saturates(H: PointSet, W: WeightFamily) -> bool:
    return verify_saturating(H.group, H, saturating(W)).holds


def _affine_invertible(G: Group, W: WeightFamily) -> bool:
    return all(G.is_identity_sum(w) and G.is_invertible(w[0]) and G.is_invertible(w[1]) for w in W)


def product_compose(H1: PointSet, H2: PointSet, mode: ProductMode, W: WeightFamily | None = None) -> ConstructionRecord:
    """H1 x H2 in G1 x G2, after checking the hypotheses that make ``mode``'s
    predicate transfer to the product.

    Raises HypothesisError naming the first hypothesis that fails.
    """
    G1, G2 = H1.group, H2.group
    space = product_space(G1, G2)
    both = (H1, H2)
    if mode is ProductMode.AP_FREE:
        _require(all(_avoids(H, THREE_AP) for H in both), "factors 3-AP free")
        _require(all(_no_involutions(H) for H in both), "ord(x-y) > 2 inside each factor set")
        claim: Predicate = three_ap_free()
    elif mode is ProductMode.ONE_ONE_AVOID:
        _require(all(0 not in H for H in both), "0 not in either factor set")
        _require(all(_avoids(H, ONE_ONE) for H in both), "factors (1,1)-avoiding")
        claim = avoiding(ONE_ONE)
    elif mode is ProductMode.W_AVOID_LINE:
        _require(W is not None, "a weight family is given")
        _require(all(_affine_invertible(G, W) for G in (G1, G2)), "lambda1 + lambda2 = 1 with invertible weights")
        _require(all(_avoids(H, W) for H in both), "factors W-avoiding")
        claim = avoiding(W)
    elif mode is ProductMode.W_SAT:
        _require(W is not None and len(W) == 1, "a single weight pair is given")
        _require(all(G.is_identity_sum(W.pairs[0]) for G in (G1, G2)), "lambda1 + lambda2 = 1")
        _require(all(_saturates(H, W) for H in both), "factors W-saturating")
        claim = saturating(W)
    elif mode is ProductMode.TWOMINUS_OR_HALF_SAT:
        W = W or TWO_MINUS_ONE
        _require(W.pairs in (TWO_MINUS_ONE.pairs, HALF_HALF.pairs), "w is (2,-1) or (1/2,1/2)")
        if W.pairs == HALF_HALF.pairs:
            _require(G1.order % 2 == 1 and G2.order % 2 == 1, "odd group orders")
        _require(all(_saturates(H, W) for H in both), "factors w-saturating")
        claim = saturating(W)
    elif mode is ProductMode.HALF_HALF_VIA_DOUBLING:
        _require(G1.order % 2 == 1 and G2.order % 2 == 1, "odd group orders")
        _require(all(0 in H for H in both), "0 in both factor sets")
        _require(all(_saturates(H, ONE_ONE) for H in both), "factors (1,1)-saturating")
        doubled = cartesian(*(PointSet(H.group, H.group.scale(2, H.indices)) for H in both), space)
        points = PointSet(space, space.scale(Fraction(1, 2), doubled.indices))
        return ConstructionRecord("product", {"mode": mode.value}, space, points, (saturating(ONE_ONE),),
                                  predicted_size=len(H1) * len(H2))
    elif mode is ProductMode.ONE_MINUS_ONE_SAT:
        _require(all(0 in H for H in both), "0 in both factor sets")
        _require(all(_saturates(H, ONE_MINUS_ONE) for H in both), "factors (1,-1)-saturating")
        claim = saturating(ONE_MINUS_ONE)
    else:  # pragma: no cover
        raise ValueError(mode)
    return ConstructionRecord(
        "product",
        {"mode": mode.value, "weights": str(W) if W is not None else None},
        space,
        cartesian(H1, H2, space),
        (claim,),
        predicted_size=len(H1) * len(H2),
    )


def affine_transform(S: PointSet, scale: Scalar, translate=0) -> PointSet:
    """{scale * s + d : s in S}; ``translate`` is an index or a coordinate tuple."""
    G = S.group
    if not isinstance(scale, FieldScalar):
        scale = as_coefficient(scale)
    if scale in (0, FieldScalar(0)) or not G.is_invertible(scale):
        raise ValueError(f"scale {scale} is not an invertible non-zero scalar on {G}")
    d = G.encode(translate) if isinstance(translate, (tuple, list)) else int(translate) % G.order
    return PointSet(G, G.add(G.scale(scale, S.indices), np.full(len(S), d, dtype=np.int64)))


def subgroup_compose(
    S: PointSet,
    T: PointSet,
    w1: int,
    w2: int,
    G: Group | None = None,
    embed: Callable[[int], int] | None = None,
    lift: Callable[[int], int] | None = None,
) -> ConstructionRecord:
    """X = {a + b : a in S, b a lift of T} with S inside a subgroup H of G and
    T a set of cosets of G/H.

    Cyclic form: S in Z_m, T in Z_n gives X = {a n + b} in Z_mn, where
    a -> a n embeds Z_m and b -> b lifts Z_n = Z_mn / nZ_mn.
    """
    if w1 + w2 != 1:
        raise ValueError(f"w1 + w2 must be 1, got {w1} + {w2}")
    H, Q = S.group, T.group
    if G is None:
        if not (H.rank == 1 and Q.rank == 1):
            raise ValueError("the cyclic form needs S and T in cyclic groups")
        n = Q.order
        G = cyclic(H.order * n)
        embed = embed or (lambda a: a * n)
        lift = lift or (lambda b: b)
    elif embed is None or lift is None:
        raise ValueError("a general ambient group needs embed and lift maps")
    X = PointSet(G, (G.add(embed(int(a)), lift(int(b))) for a in S for b in T))
    W = single(w1, w2)

    def order_ok(P: PointSet) -> bool:
        idx = P.indices
        return all(
            w1 % P.group.element_order(P.group.sub(int(x), int(y))) != 0
            for i, x in enumerate(idx)
            for y in idx[i + 1:]
        )

    sat = _saturates(S, W) and _saturates(T, W)
    avoid = _avoids(S, W) and _avoids(T, W) and order_ok(S) and order_ok(T)
    if sat and avoid:
        claims: tuple[Predicate, ...] = (complete(W),)
    elif avoid:
        claims = (avoiding(W),)
    elif sat:
        claims = (saturating(W),)
    else:
        claims = ()
    return ConstructionRecord(
        "subgroup",
        {"w1": w1, "w2": w2, "S": S.to_list(), "T": T.to_list()},
        G,
        X,
        claims,
        predicted_size=len(S) * len(T),
        notes={"saturating_hypotheses": sat, "avoiding_hypotheses": avoid},
    )


def iterate_compose(S: Sequence[int], m: int, w1: int, w2: int, times: int) -> ConstructionRecord:
    """Compose a set of Z_m with itself ``times`` times, producing a set of Z_(m^(times+1))."""
    base = PointSet(cyclic(m), S)
    cur = base
    rec = None
    for _ in range(times):
        rec = subgroup_compose(cur, base, w1, w2)
        cur = rec.points
    if rec is None:
        raise ValueError("times must be >= 1")
    return rec
