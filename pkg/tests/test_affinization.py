import itertools

import pytest
from hypothesis import given, settings, strategies as st

import printed
from qcluster.affinization import (
    FAMILIES,
    PRIMAL_FAMILIES,
    ModuleLabel,
    St,
    T,
    Tt,
    dual_equation,
    enumerate_instances,
    highest_weight,
    is_known_special,
    labels_for_weight,
    make_equation,
    simplicity_census,
    special_family,
    suite_instances,
    table1_prediction,
    verify_equation,
    verify_table1,
)
from qcluster.cartan import build_cartan
from qcluster.errors import ConstraintViolated, InvalidLabel, Unsupported
from qcluster.monomial import Monomial, a_monomial, leq, monomial_product
from qcluster.qchar import enumerate_dominant, iota_monomial

M = Monomial.from_text


def weights(eq):
    def hw(xs):
        return sorted(highest_weight(x) for x in xs if not x.is_trivial())

    return hw(eq.lhs), hw(eq.rhs_first), monomial_product(highest_weight(x) for x in eq.rhs_second)


def test_highest_weight_examples():
    assert highest_weight(T(0, 1, 1, 0)) == M("1_-4 2_-1")
    assert highest_weight(T(0, 0, 2, 0)) == M("2_-3 2_-1")
    # the printed C4 factors [4_-3] and [4_-7 1_0]
    assert highest_weight(Tt(-3, 0, 0, 0, 1)) == M("4_-3")
    assert highest_weight(Tt(-7, 1, 0, 0, 1)) == M("4_-7 1_0")
    assert highest_weight(T(0, 1, 0, 0)) * highest_weight(T(0, 0, 1, 0)) == M("1_-2 2_-1")


def test_label_text_and_validation():
    x = ModuleLabel.parse("Stilde:-2:1,1,0")
    assert x == St(-2, 1, 1, 0) and ModuleLabel.parse(x.to_text()) == x
    assert ModuleLabel.from_dict(x.to_dict()) == x
    assert x.mirror().variant == "S" and x.mirror().mirror() == x
    for bad in ("X:0:1,0,0", "T:0", "T:a:1,0", "S:0:1,1,1", "S:0:1,0,0", "T:0:-1,0,0"):
        with pytest.raises(InvalidLabel):
            ModuleLabel.parse(bad)
    with pytest.raises(InvalidLabel):
        highest_weight(T(0, 1, 0, 0), build_cartan(4))


def test_trivial_label():
    assert highest_weight(T(5, 0, 0, 0)).is_unit()


def test_make_equation_eqn1():
    eq = make_equation("eqn1", 3, 0, (1, 1, 0))
    assert weights(eq) == printed.equations(printed.C3)[0]
    assert eq.lhs == (T(0, 1, 0, 0), T(0, 1, 1, 0))
    assert eq.rhs_first == (T(0, 0, 1, 0), T(0, 2, 0, 0))
    assert eq.rhs_second == (T(0, 0, 0, 0), T(0, 0, 2, 0))
    with pytest.raises(ConstraintViolated):
        make_equation("eqn1", 3, 0, (1, 0, 0))
    with pytest.raises(ConstraintViolated):
        make_equation("nope", 3, 0, (1, 1, 0))


def test_make_equation_eqn511():
    eq = make_equation("eqn511", 3, -2, (0, 1, 1))
    assert weights(eq) == printed.equations(printed.C3)[2]


def test_eqn2_range():
    # the index i runs over 1 < i <= n - 2
    assert make_equation("eqn2", 4, 0, (0, 1, 1, 0)).params
    with pytest.raises(ConstraintViolated):
        make_equation("eqn2", 3, 0, (0, 1, 1))


@pytest.mark.parametrize(
    "suite,block",
    [("c3-examples", printed.C3), ("c4-examples", printed.C4), ("c3-dual-examples", printed.DUAL)],
)
def test_suites_match_printed(suite, block):
    got = [weights(eq) for eq in suite_instances(suite)]
    assert got == printed.equations(block)


def test_verify_small(engine3):
    rep = verify_equation(make_equation("eqn1", 3, 0, (1, 1, 0)), engine3)
    assert rep.verdict == "exact" and rep.residual_terms == 0 and rep.restricted_ok
    assert rep.dominant_census["lhs"] == [["1_-4 1_-2 2_-1", 1], ["2_-3 2_-1", 1]]
    d = rep.to_dict()
    assert d["verdict"] == "exact" and d["residual_terms"] == 0


def test_verify_detects_wrong_identity(engine3):
    eq = make_equation("eqn1", 3, 0, (1, 1, 0))
    broken = type(eq)(eq.family, eq.n, eq.s, eq.k, eq.lhs, eq.rhs_first, (T(0, 0, 0, 0), T(0, 1, 0, 0)), eq.params)
    rep = verify_equation(broken, engine3)
    assert rep.verdict == "fail" and rep.residual_terms > 0


def test_dual_regional_is_iota_image(engine4):
    eq = make_equation("eqn5211d", 4, -3, (1, 0, 0, 1))
    rep = verify_equation(eq, engine4, "auto")
    assert rep.verdict == "regional/certified" and rep.residual_terms == 0
    primal = verify_equation(dual_equation(eq), engine4, "auto")
    flip = [[iota_monomial(M(m), 4).to_text(), c] for m, c in primal.dominant_census["lhs"]]
    assert rep.dominant_census["lhs"] == flip


def test_table1_examples():
    pred = table1_prediction(make_equation("eqn1", 3, 0, (1, 1, 0)))
    assert len(pred["lhs"]) == 2 and len(pred["rhs_first"]) == 1 and len(pred["rhs_second"]) == 1
    eq = make_equation("eqn512", 3, 0, (0, 2, 1))
    pred = table1_prediction(eq)
    top = monomial_product(highest_weight(x) for x in eq.lhs)
    cd = build_cartan(3)
    assert pred["lhs"] == [top, top / a_monomial(cd, 3, 0 + 4 * 1 - 6)]
    with pytest.raises(Unsupported):
        table1_prediction(make_equation("eqn6", 3, 0, (1, 1, 0)))


@pytest.mark.parametrize(
    "spec", [("eqn1", 3, 0, (2, 1, 0)), ("eqn511", 3, 0, (1, 1, 1)), ("eqn512", 3, 0, (0, 2, 1))]
)
def test_table1_against_full_scan(spec, engine3):
    # dominant monomials of the complete products, found by a plain exponent scan
    eq = make_equation(*spec)
    pred = table1_prediction(eq)
    for part in ("lhs", "rhs_first", "rhs_second"):
        poly = None
        for x in getattr(eq, part):
            c = engine3.character(x).poly
            poly = c if poly is None else poly * c
        found = sorted((m, c) for m, c in poly.items() if all(e >= 0 for _, e in m.items()))
        assert found == sorted((m, 1) for m in pred[part])
    assert verify_table1(eq, engine3)["ok"]


def test_table1_chains_descend():
    for spec in [("eqn1", 3, 0, (3, 1, 0)), ("eqn511", 3, 0, (0, 1, 3)), ("eqn2", 4, 0, (0, 2, 1, 0))]:
        eq = make_equation(*spec)
        cd = build_cartan(eq.n)
        for part in ("lhs", "rhs_first"):
            chain = table1_prediction(eq)[part]
            assert all(leq(cd, b, a) and a != b for a, b in zip(chain, chain[1:]))


def test_simplicity_census(engine3):
    rep = simplicity_census(make_equation("eqn1", 3, 0, (1, 1, 0)), engine3)
    assert rep["rhs_second"]["verdict"] == "simple"
    rep = simplicity_census(make_equation("eqn511", 3, -2, (0, 1, 1)), engine3)
    assert rep["rhs_first"]["verdict"] == "simple"
    assert len(rep["rhs_first"]["dominant"]) == 1


def test_specialness_classification():
    assert special_family((0, 1, 1)) == "a"
    assert special_family((1, 1, 1)) == "b"
    assert special_family((3, 1, 0, 1)) == "b"
    assert special_family((2, 1, 0)) == "d"
    assert is_known_special(T(0, 2, 1, 0))
    assert not is_known_special(Tt(0, 2, 1, 0))
    assert is_known_special(Tt(0, 0, 0, 3))


def test_enumerate_instances_covers_families():
    fams = {eq.family for eq in enumerate_instances(3, 3)}
    assert {"eqn1", "eqn511", "eqn512", "eqn5211", "eqn5221"} <= fams
    duals = {eq.family for eq in enumerate_instances(3, 2, dual=True)}
    assert duals <= set(FAMILIES) - set(PRIMAL_FAMILIES)


# ---------------------------------------------------------------- properties

instance_args = st.tuples(
    st.sampled_from(FAMILIES),
    st.integers(3, 5),
    st.integers(-6, 6),
    st.lists(st.integers(0, 3), min_size=5, max_size=5),
)


@settings(max_examples=1000, deadline=None)
@given(st.integers(2, 5), st.integers(-8, 8), st.lists(st.integers(0, 3), min_size=5, max_size=5))
def test_t_and_ttilde_are_mirror_images(n, s, k):
    k = tuple(k[:n])
    a = highest_weight(ModuleLabel("T", s, k))
    b = highest_weight(ModuleLabel("Ttilde", s, k))
    assert a == b.map_variables(lambda i, t: (i, -t, 1))


@settings(max_examples=1000, deadline=None)
@given(instance_args)
def test_instances_are_consistent(args):
    fam, n, s, k = args
    k = tuple(k[:n])
    try:
        eq = make_equation(fam, n, s, k)
    except ConstraintViolated:
        return
    cd = build_cartan(n)
    top = monomial_product(highest_weight(x) for x in eq.lhs)
    assert top == monomial_product(highest_weight(x) for x in eq.rhs_first)
    second = monomial_product(highest_weight(x) for x in eq.rhs_second)
    assert leq(cd, second, top) and second != top
    dual = dual_equation(eq)
    assert dual_equation(dual) == eq
    for a, b in zip(eq.slots(), dual.slots()):
        assert b == a.mirror()


@settings(max_examples=1000, deadline=None)
@given(
    st.integers(3, 5),
    st.sampled_from(["T", "Ttilde", "Stilde", "S"]),
    st.integers(-8, 8),
    st.lists(st.integers(0, 3), min_size=5, max_size=5),
)
def test_labels_for_weight_inverts(n, variant, s, k):
    k = tuple(k[:n])
    label = ModuleLabel(variant, s, k)
    try:
        m = highest_weight(label)
    except InvalidLabel:
        return
    found = labels_for_weight(m, n)
    assert all(highest_weight(x) == m for x in found)
    if not label.is_trivial():
        assert label in found


def test_equation_instances_nonempty():
    assert len(list(itertools.islice(iter(enumerate_instances(4, 2)), 5))) == 5
