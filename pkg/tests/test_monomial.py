import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qcluster.cartan import build_cartan
from qcluster.errors import Undefined
from qcluster.monomial import (
    ALatticePoint,
    Monomial,
    a_monomial,
    decompose_in_a_lattice,
    is_antidominant,
    is_dominant,
    is_j_dominant,
    is_right_negative,
    leq,
    monomial_product,
    mul,
    v_node,
    v_total,
)

CD3 = build_cartan(3)
M = Monomial.from_text

monomials = st.dictionaries(
    st.tuples(st.integers(1, 3), st.integers(-8, 8)), st.integers(-3, 3), max_size=6
).map(Monomial)
a_points = st.dictionaries(
    st.tuples(st.integers(1, 3), st.integers(-8, 8)), st.integers(-3, 3), max_size=5
).map(ALatticePoint)
a_inverse_products = st.lists(st.tuples(st.integers(1, 3), st.integers(-8, 8)), min_size=1, max_size=6).map(
    lambda pairs: monomial_product(a_monomial(CD3, i, s).inverse() for i, s in pairs)
)


def test_mul_examples():
    m = mul(M("1_-2"), M("1_-4"))
    assert m.exponent(1, -2) == 1 and m.exponent(1, -4) == 1 and len(m) == 2
    x = M("3_-6 2_-1^2 1_4^-1")
    assert (x * x.inverse()).is_unit()


def test_text_and_json():
    m = M("3_-6 2_-1")
    assert m.to_text() == "2_-1 3_-6"
    assert m.to_dict() == {"factors": [{"i": 2, "s": -1, "e": 1}, {"i": 3, "s": -6, "e": 1}]}
    assert Monomial.from_dict(m.to_dict()) == m
    assert M("1").is_unit() and Monomial.unit().to_text() == "1"
    with pytest.raises(ValueError):
        M("x_1")


def test_a_monomials_c3():
    for s in (-3, 0, 5):
        assert a_monomial(CD3, 2, s) == M(f"2_{s + 1} 2_{s - 1} 1_{s}^-1 3_{s}^-1")
        assert a_monomial(CD3, 3, s) == M(f"3_{s + 2} 3_{s - 2} 2_{s + 1}^-1 2_{s - 1}^-1")
        assert a_monomial(CD3, 1, s) == M(f"1_{s + 1} 1_{s - 1} 2_{s}^-1")


def test_a_monomial_sl2():
    cd = build_cartan(1)
    assert a_monomial(cd, 1, 4) == M("1_3 1_5")


def test_a_monomial_bad_node():
    with pytest.raises(ValueError):
        a_monomial(CD3, 4, 0)


def test_dominance_examples():
    assert is_dominant(M("1_-2"))
    a = a_monomial(CD3, 3, 1).inverse()
    assert not is_dominant(a) and not is_antidominant(a)
    assert is_dominant(Monomial.unit()) and is_antidominant(Monomial.unit())
    assert is_j_dominant(a, 2) and not is_j_dominant(a, 3)


def test_right_negative_examples():
    for i in (1, 2, 3):
        assert is_right_negative(a_monomial(CD3, i, 0).inverse())
    assert not is_right_negative(M("1_-2 2_5"))
    with pytest.raises(Undefined):
        is_right_negative(Monomial.unit())


def test_decompose_examples():
    m = a_monomial(CD3, 3, 0) / a_monomial(CD3, 1, 5)
    assert decompose_in_a_lattice(CD3, m).as_dict() == {(3, 0): 1, (1, 5): -1}
    assert decompose_in_a_lattice(CD3, Monomial.unit()) == ALatticePoint()
    assert decompose_in_a_lattice(CD3, M("1_-2")) is None


def test_no_small_solution_for_single_variable():
    # brute force over small lattice points: nothing recomposes to 1_-2
    target = M("1_-2")
    gens = [(i, s) for i in (1, 2, 3) for s in range(-5, 1)]
    for a, b in itertools.combinations(gens, 2):
        for ea, eb in itertools.product((-1, 1), repeat=2):
            assert ALatticePoint({a: ea, b: eb}).recompose(CD3) != target


def test_leq_examples():
    m = M("2_-3 2_-1")
    a = a_monomial(CD3, 3, 2)
    assert leq(CD3, m, m)
    assert leq(CD3, m / a, m)
    assert not leq(CD3, m, m / a)


def test_v_counts():
    assert v_total(ALatticePoint({(3, 1): 1})) == 1
    assert v_total(ALatticePoint()) == 0
    p = decompose_in_a_lattice(CD3, (a_monomial(CD3, 1, 0) * a_monomial(CD3, 2, 3) * a_monomial(CD3, 2, 7)))
    assert v_total(p) == 3 and v_node(p, 2) == 2 and v_node(p, 3) == 0


@settings(max_examples=1000, deadline=None)
@given(monomials, monomials, monomials)
def test_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * Monomial.unit() == a
    assert (a / a).is_unit()
    assert M(a.to_text()) == a
    assert Monomial.from_dict(a.to_dict()) == a


@settings(max_examples=1000, deadline=None)
@given(a_points)
def test_decompose_round_trip(p):
    m = p.recompose(CD3)
    q = decompose_in_a_lattice(CD3, m)
    assert q == p
    assert q.recompose(CD3) == m


@settings(max_examples=1000, deadline=None)
@given(a_inverse_products, a_inverse_products)
def test_right_negative_closure(m1, m2):
    assert is_right_negative(m1)
    assert is_right_negative(m2)
    assert is_right_negative(m1 * m2)


@settings(max_examples=1000, deadline=None)
@given(monomials, a_points, a_points)
def test_leq_partial_order(m, p, q):
    # sample comparable triples below m by nonnegative A-exponents
    pp = ALatticePoint({k: abs(v) for k, v in p.items()})
    qq = ALatticePoint({k: abs(v) for k, v in q.items()})
    x = m / pp.recompose(CD3)
    y = x / qq.recompose(CD3)
    assert leq(CD3, m, m)
    assert leq(CD3, x, m) and leq(CD3, y, x) and leq(CD3, y, m)
    if leq(CD3, m, x):
        assert m == x
