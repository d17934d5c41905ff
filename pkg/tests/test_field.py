import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from apsat.field import (
    FieldError,
    VectorSpace,
    as_vector_space,
    from_group,
    is_irreducible,
    line_family,
    make_field,
    order_of_minus_two,
    smallest_irreducible,
    to_group,
)
from apsat.groups import FieldScalar, make_group

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2), (2, 6)]


def sympy_irreducible(coeffs_low_high, p):
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs_low_high)), x, modulus=p)
    return poly.is_irreducible


@pytest.mark.parametrize("p, k", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5), (7, 2)])
def test_modulus_is_first_irreducible_by_code(p, k):
    found = smallest_irreducible(p, k)
    assert found[-1] == 1 and len(found) == k + 1
    assert sympy_irreducible(list(found), p)
    code = oracles.poly_to_code(found, p)
    # every monic polynomial of degree k with a smaller code is reducible
    for c in range(p**k, code):
        low = oracles.code_to_poly(c, p, k) + [1]
        assert not sympy_irreducible(low, p)


def test_modulus_examples():
    assert make_field(2, 3).modulus == (1, 1, 0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(2, 4).modulus == (1, 1, 0, 0, 1)
    assert make_field(5, 2).modulus == (2, 0, 1)


def test_irreducibility_check_agrees_with_sympy():
    for p, k in [(2, 3), (3, 2), (2, 4)]:
        for tail in itertools.product(range(p), repeat=k):
            poly = list(tail) + [1]
            assert is_irreducible(poly, p) == sympy_irreducible(poly, p)


def test_rejects_non_prime():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        make_field(5, 0)


def test_prime_field_arithmetic():
    F = make_field(7)
    assert F.inv(2) == 4
    for x, y in itertools.product(range(7), repeat=2):
        assert F.mul(x, y) == x * y % 7
        assert F.add(x, y) == (x + y) % 7
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_gf8_example():
    F = make_field(2, 3)
    alpha = F.element((0, 1, 0))
    alpha2 = F.element((0, 0, 1))
    assert F.coeffs(F.mul(alpha, alpha2)) == (1, 1, 0)


@pytest.mark.parametrize("p, k", FIELDS)
def test_mul_matches_polynomial_oracle(p, k):
    F = make_field(p, k)
    rng = np.random.default_rng(p * 100 + k)
    for x, y in rng.integers(0, F.q, size=(50, 2)):
        a, b = oracles.code_to_poly(int(x), p, k), oracles.code_to_poly(int(y), p, k)
        expect = oracles.poly_to_code(oracles.poly_mulmod(a, b, list(F.modulus), p), p)
        assert F.mul(int(x), int(y)) == expect


@pytest.mark.parametrize("p, k", FIELDS)
def test_primitive_is_smallest_generator(p, k):
    F = make_field(p, k)
    q = F.q
    assert F.order(F.primitive) == q - 1
    assert F.pow(F.primitive, q - 1) == 1
    for g in range(1, F.primitive):
        assert F.order(g) < q - 1


@pytest.mark.parametrize("p, k", [(2, 4), (3, 2), (5, 2), (7, 1), (2, 15)])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_axioms(p, k, data):
    F = make_field(p, k)
    x, y, z = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(x, F.neg(x)) == 0
    if x:
        assert F.mul(x, F.inv(x)) == 1
        assert F.pow(x, F.q - 1) == 1


def test_trace_examples_and_errors():
    F = make_field(2, 2)
    alpha = F.element((0, 1))
    assert F.trace(0) == 0
    assert F.trace(alpha) == 1
    with pytest.raises(FieldError):
        make_field(2, 3).trace(1, 2)


@pytest.mark.parametrize("p, k, h", [(2, 6, 2), (2, 6, 3), (3, 2, 1), (2, 9, 3), (5, 2, 1)])
def test_trace_linear_and_in_subfield(p, k, h):
    F = make_field(p, k)
    rng = np.random.default_rng(k * h)
    for x, y in rng.integers(0, F.q, size=(40, 2)):
        x, y = int(x), int(y)
        t = F.trace(x, h)
        assert F.in_subfield(t, h)
        assert F.trace(F.add(x, y), h) == F.add(t, F.trace(y, h))


def test_is_square_examples():
    assert not make_field(5).is_square(make_field(5).from_int(-2))
    assert make_field(3).is_square(make_field(3).from_int(-2))
    assert make_field(11).is_square(0)


@pytest.mark.parametrize("p, k", [(3, 1), (5, 1), (13, 1), (3, 2), (5, 2), (3, 3)])
def test_is_square_brute_force(p, k):
    F = make_field(p, k)
    squares = {F.mul(y, y) for y in range(F.q)}
    for x in range(F.q):
        assert F.is_square(x) == (x in squares)
    for x, y in itertools.product(range(1, F.q), repeat=2):
        if (x * 7 + y) % 5 == 0:
            assert F.is_square(F.mul(x, y)) == (F.is_square(x) == F.is_square(y))


@pytest.mark.parametrize("p, k", [(5, 2), (7, 2), (11, 2), (5, 3), (13, 2)])
def test_order_of_minus_two_is_prime_field_order(p, k):
    assert order_of_minus_two(make_field(p, k)) == order_of_minus_two(make_field(p))
    o = 1
    while pow(-2, o, p) != 1:
        o += 1
    assert order_of_minus_two(make_field(p)) == o


def test_group_embedding_examples():
    F5 = make_field(5)
    assert to_group(F5, (0, 0)) == 0
    F4 = make_field(2, 2)
    alpha = F4.element((0, 1))
    V = VectorSpace(F4, 2)
    idx = to_group(F4, (alpha, 1))
    assert make_group([2] * 4).decode(idx) == (0, 1, 1, 0)
    assert V.point((alpha, 1)) == idx


@given(st.sampled_from([(2, 2), (3, 2), (5, 1), (2, 3)]), st.data())
def test_group_embedding_roundtrip_and_additive(pk, data):
    F = make_field(*pk)
    V = VectorSpace(F, 3)
    v = tuple(data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    u = tuple(data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert from_group(F, to_group(F, v), 3) == v
    assert V.vector(V.point(v)) == v
    # field addition is group addition
    s = tuple(F.add(a, b) for a, b in zip(u, v))
    assert V.add(V.point(u), V.point(v)) == V.point(s)


def test_field_scalar_action():
    F = make_field(3, 2)
    V = VectorSpace(F, 2)
    lam = 5
    for v in [(1, 2), (4, 7), (0, 8)]:
        expect = tuple(F.mul(lam, c) for c in v)
        assert V.vector(V.scale(FieldScalar(lam), V.point(v))) == expect


def test_as_vector_space_and_line_family():
    V = as_vector_space(make_group([3, 3]))
    assert V.q == 3 and V.dim == 2
    with pytest.raises(Exception):
        as_vector_space(make_group([3, 5]))
    fam = line_family(make_field(5))
    assert len(fam) == 3
    assert all((a + b - 1) % 5 == 0 for a, b in fam)
    fam4 = line_family(make_field(2, 2))
    assert len(fam4) == 2
    with pytest.raises(FieldError):
        line_family(make_field(2))
