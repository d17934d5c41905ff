import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from apsat.constructions import gyok3_set, iterate_compose, lines_construction, mrose, parabola, singer
from apsat.constructions import axes_product
from apsat.field import make_field
from apsat.groups import HALF_HALF, ONE_ONE, TWO_MINUS_ONE, cyclic, make_group, single
from apsat.predicates import (
    Kind,
    complete,
    complete_three_ap,
    saturating,
    three_ap_saturating,
    verify,
)
from apsat.search import (
    BoundKind,
    audit_chain,
    lower_bound,
    min_complete_avoiding,
    min_saturating,
)


def test_lower_bound_examples():
    b = lower_bound(BoundKind.SAT_3AP, 9)
    assert abs(b.value - 2.6218) < 1e-4 and b.ceiling == 3
    assert lower_bound(BoundKind.SAT_W, 49).ceiling == 7
    b = lower_bound(BoundKind.SAT_DIAG, 9)
    assert abs(b.value - 3.7720) < 1e-4 and b.ceiling == 4
    with pytest.raises(ValueError):
        lower_bound(BoundKind.SAT_W, 0)


@given(st.integers(1, 10**7), st.sampled_from(list(BoundKind)))
def test_lower_bound_ceiling_matches_value(n, kind):
    b = lower_bound(kind, n)
    assert b.ceiling - 1 < b.value + 1e-9
    assert b.value <= b.ceiling + 1e-9


def test_min_saturating_examples():
    r = min_saturating(cyclic(3), TWO_MINUS_ONE)
    assert r.minimum == 2 and r.witness.to_list() == [0, 1] and r.exhaustive
    assert min_saturating(cyclic(7), TWO_MINUS_ONE).minimum == 3
    # in the trivial group the empty set leaves the neutral element uncovered
    assert min_saturating(cyclic(1), TWO_MINUS_ONE).minimum == 1


def test_min_complete_examples():
    assert min_complete_avoiding(make_group([3, 3]), complete_three_ap()).minimum == 4
    assert min_complete_avoiding(make_group([5, 5]), complete_three_ap()).minimum == 5
    r = min_complete_avoiding(cyclic(5), TWO_MINUS_ONE)
    assert r.minimum is None and r.none_exists and r.exhaustive


SMALL = [[3], [4], [5], [6], [7], [8], [9], [2, 2], [2, 4], [3, 3], [10], [11], [12], [2, 2, 2]]


def _oracle_pred(factors, kind, w):
    if kind == "3ap-sat":
        return lambda S: oracles.is_3ap_saturating(factors, S)
    if kind == "3ap-complete":
        return lambda S: oracles.is_3ap_free(factors, S) and oracles.is_3ap_saturating(factors, S)
    if kind == "w-sat":
        return lambda S: oracles.is_saturating(factors, S, [w])
    return lambda S: oracles.is_avoiding(factors, S, [w]) and oracles.is_saturating(factors, S, [w])


@pytest.mark.parametrize("factors", SMALL)
@pytest.mark.parametrize("kind, w", [
    ("3ap-sat", None), ("3ap-complete", None),
    ("w-sat", (2, -1)), ("w-complete", (2, -1)),
    ("w-sat", (1, 1)), ("w-complete", (1, 1)), ("w-sat", (1, -1)), ("w-complete", (3, -2)),
])
def test_search_matches_enumeration(factors, kind, w):
    G = make_group(factors)
    W = single(*w) if w else None
    if W is not None:
        try:
            W.check(G)
        except ValueError:
            return
    if kind == "3ap-sat":
        r = min_saturating(G, three_ap_saturating())
    elif kind == "3ap-complete":
        r = min_complete_avoiding(G, complete_three_ap())
    elif kind == "w-sat":
        r = min_saturating(G, saturating(W))
    else:
        r = min_complete_avoiding(G, complete(W))
    size, witness = oracles.min_by_enumeration(factors, _oracle_pred(factors, kind, w))
    assert r.exhaustive
    assert r.minimum == size
    assert (r.witness.to_list() if r.witness is not None else None) == witness
    assert r.none_exists == (size is None)


@pytest.mark.parametrize("factors", [[7], [3, 3], [13], [15], [5, 5]])
def test_search_deterministic_across_threads(factors):
    G = make_group(factors)
    for pred in (three_ap_saturating(), complete_three_ap(), saturating(TWO_MINUS_ONE)):
        runner = min_complete_avoiding if pred.kind is Kind.COMPLETE_THREE_AP else min_saturating
        ref = runner(G, pred, threads=1)
        for t in (2, 4):
            got = runner(G, pred, threads=t)
            assert (got.minimum, got.witness) == (ref.minimum, ref.witness)


def test_budget_exhaustion_is_flagged():
    r = min_saturating(make_group([5, 5]), three_ap_saturating(), budget=3)
    assert not r.exhaustive and r.minimum is None and not r.none_exists


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("APSAT_BUDGET", "2")
    assert not min_saturating(make_group([5, 5]), three_ap_saturating()).exhaustive


def test_limit_caps_search():
    r = min_complete_avoiding(make_group([5, 5]), complete_three_ap(), limit=4)
    assert r.minimum is None and not r.exhaustive and r.searched_up_to == 4


def test_search_other_families():
    r = min_saturating(cyclic(9), saturating(HALF_HALF))
    assert r.minimum is not None and verify(cyclic(9), r.witness, saturating(HALF_HALF)).holds
    r = min_saturating(cyclic(9), saturating(ONE_ONE))
    assert r.minimum >= lower_bound(BoundKind.SAT_DIAG, 9).value


@pytest.mark.parametrize("M, n", [(7, 1), (21, 2)])
def test_singer_meets_square_root_bound(M, n):
    r = min_complete_avoiding(cyclic(M), complete(TWO_MINUS_ONE))
    assert r.exhaustive and r.minimum == math.isqrt(M - 1) + 1 == singer(n).size
    assert r.start_size == lower_bound(BoundKind.SAT_W, M).ceiling


@pytest.mark.parametrize("m", [5, 7, 9, 11, 13, 15])
def test_audit_chain(m):
    a = audit_chain(cyclic(m))
    assert a.exhaustive and a.holds


def test_audit_z5_corner():
    a = audit_chain(cyclic(5))
    assert a.values()["a((2,-1))"] is None
    assert a.holds


def test_audit_rejects_even_order():
    with pytest.raises(ValueError):
        audit_chain(cyclic(8))


def _records_up_to_25():
    F3, F5 = make_field(3), make_field(5)
    yield parabola(F3)
    yield parabola(F5)
    yield lines_construction(F5)
    yield lines_construction(F5, star=True)
    yield singer(1)
    yield singer(2)
    yield axes_product(cyclic(5), cyclic(5), star=True)
    yield iterate_compose([0, 1], 4, 2, -1, 1)
    for m in (3, 4, 5, 7, 9, 16, 17, 21, 25):
        yield gyok3_set(m)
    for m in (3, 5, 7, 9, 11, 15, 21, 23, 25):
        yield mrose(modulus=m)


@pytest.mark.parametrize("rec", list(_records_up_to_25()), ids=lambda r: f"{r.name}-{r.space}")
def test_constructions_not_below_true_minimum(rec):
    bound_kind = {Kind.THREE_AP_SATURATING: BoundKind.SAT_3AP, Kind.COMPLETE_THREE_AP: BoundKind.SAT_3AP}
    for pred in rec.claims:
        if pred.kind in (Kind.COMPLETE_THREE_AP, Kind.COMPLETE_W):
            r = min_complete_avoiding(rec.space, pred)
        elif pred.kind in (Kind.THREE_AP_SATURATING, Kind.W_SATURATING):
            r = min_saturating(rec.space, pred)
        else:
            continue
        assert r.exhaustive and r.minimum is not None
        assert rec.size >= r.minimum
        if pred.kind in bound_kind and rec.space.order % 2:
            assert lower_bound(bound_kind[pred.kind], rec.space.order).value <= r.minimum + 1e-9
        if pred.weights is not None and len(pred.weights) == 1 and not pred.weights.three_ap:
            assert lower_bound(BoundKind.SAT_W, rec.space.order).value <= r.minimum + 1e-9
