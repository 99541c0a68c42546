import pytest
from hypothesis import given, settings, strategies as st

from qcluster.affinization import ModuleLabel, auto_region, highest_weight, restrict_to_region
from qcluster.cartan import build_cartan, build_sl2
from qcluster.errors import BudgetExceeded, IncompleteCharacter, NotDominant
from qcluster.laurent import LaurentPoly
from qcluster.monomial import Monomial, a_monomial, is_dominant, is_right_negative, leq
from qcluster.qchar import (
    CharacterCache,
    QCharacter,
    TruncationRegion,
    cache_key,
    certify_truncation,
    compute_character,
    enumerate_antidominant,
    enumerate_dominant,
    frenkel_mukhin,
    iota,
    iota_monomial,
    is_anti_special,
    is_special,
    restrict_character,
)

M = Monomial.from_text
CD3 = build_cartan(3)
_memo = {}


def fm(cd, m, region=None):
    key = (cd.rank, m, region)
    if key not in _memo:
        _memo[key] = frenkel_mukhin(cd, m, region)
    return _memo[key]


def case1_candidate(cd, k2, k3):
    m_plus = highest_weight(ModuleLabel("Ttilde", 0, (0, k2, k3)), cd)
    out = [m_plus]
    for j in range(k3):
        out.append(out[-1] / a_monomial(cd, 3, 4 * k3 - 4 * j - 2))
    return m_plus, out


def test_sl2_fundamental():
    q = frenkel_mukhin(build_sl2(), M("1_-1"))
    assert q.poly == LaurentPoly({M("1_-1"): 1, M("1_1^-1"): 1})


def test_kr_c3_is_special():
    m = M("2_-3 2_-1")
    q = fm(CD3, m)
    assert q.complete and enumerate_dominant(q) == [(m, 1)]
    assert is_special(q)


@pytest.mark.parametrize("k2,k3", [(1, 1), (1, 2), (2, 1), (2, 2), (0, 3)])
def test_case1_truncated_set(k2, k3):
    m_plus, cand = case1_candidate(CD3, k2, k3)
    region = TruncationRegion(4 * k3 + 2 * k2 - 1)
    q = frenkel_mukhin(CD3, m_plus, region)
    assert q.poly == LaurentPoly({m: 1 for m in cand})
    assert len(q) == k3 + 1
    assert certify_truncation(CD3, m_plus, region, cand)


def test_certify_rejects_second_dominant():
    m_plus, cand = case1_candidate(CD3, 1, 1)
    region = TruncationRegion(5)
    rep = certify_truncation(CD3, m_plus, region, cand + [M("3_0")])
    assert not rep
    assert "ii" in {c for c, _ in rep.violations}


def test_certify_rejects_missing_descendant():
    m_plus, cand = case1_candidate(CD3, 1, 2)
    region = TruncationRegion(9)
    rep = certify_truncation(CD3, m_plus, region, cand[:-1])
    assert not rep
    assert "iv" in {c for c, _ in rep.violations}


def test_specialness_examples(engine3):
    for k in [(1, 0, 0), (2, 0, 0), (3, 0, 0)]:
        assert is_special(engine3.character(ModuleLabel("T", 0, k)))
    q = engine3.character(ModuleLabel("Ttilde", 0, (1, 1, 0)))
    assert is_anti_special(q)
    unit = QCharacter(LaurentPoly.one(), Monomial.unit())
    assert is_special(unit) and is_anti_special(unit)


def test_incomplete_not_conclusive():
    q = frenkel_mukhin(CD3, M("2_-3 2_-1"), TruncationRegion(-100))
    assert not q.complete
    with pytest.raises(IncompleteCharacter):
        is_special(q)
    # a region whose complement is right-negative makes the count definitive
    q = frenkel_mukhin(CD3, M("2_-3 2_-1"), auto_region(CD3, M("2_-3 2_-1")))
    assert is_special(q, CD3)


def test_not_dominant_and_budget():
    with pytest.raises(NotDominant):
        frenkel_mukhin(CD3, M("1_0^-1"))
    with pytest.raises(BudgetExceeded):
        frenkel_mukhin(CD3, M("2_-3 2_-1"), budget=5)


def test_iota_examples():
    q = fm(CD3, M("1_-2"))
    dual = iota(q, 3)
    assert dual.highest == M("1_2")
    assert iota(dual.poly, 3) == q.poly
    assert iota_monomial(M("3_5^2 1_-1"), 3) == M("3_3^-2 1_9^-1")


@pytest.mark.parametrize("k", [(1, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 1), (0, 0, 2)])
def test_iota_exchanges_families(k):
    t = fm(CD3, highest_weight(ModuleLabel("T", 0, k), CD3))
    tt = fm(CD3, highest_weight(ModuleLabel("Ttilde", 0, k), CD3))
    assert iota(t.poly, 3) == tt.poly


def test_restriction():
    assert restrict_character(LaurentPoly.monomial(M("1_-2"))) == LaurentPoly.monomial(M("1_0"))
    m = M("2_-3 2_-1")
    for i in (1, 2, 3):
        a = a_monomial(CD3, i, 4)
        root = Monomial(((j, 0), CD3.c(j, i)) for j in CD3.nodes)
        got = restrict_character(LaurentPoly.monomial(m / a))
        assert got == LaurentPoly.monomial(next(iter(restrict_character(LaurentPoly.monomial(m)).monomials())) / root)


def test_dominant_scan_eqn1_product(engine3):
    a = engine3.character(ModuleLabel("T", 0, (1, 0, 0))).poly
    b = engine3.character(ModuleLabel("T", 0, (1, 1, 0))).poly
    prod = a * b
    brute = sorted(m.to_text() for m, _ in prod.items() if all(e >= 0 for _, e in m.items()))
    assert len(brute) == 2
    assert sorted(m.to_text() for m, _ in enumerate_dominant(prod)) == brute


def test_antidominant_enumeration():
    q = fm(CD3, M("1_-2"))
    low = enumerate_antidominant(q)
    assert len(low) == 1 and low[0][0] == iota_monomial(M("1_2"), 3)


def test_cache_round_trip(tmp_path):
    cache = CharacterCache(tmp_path)
    m = M("2_-3 2_-1")
    q = compute_character(CD3, m, None, None, cache)
    assert len(cache.entries()) == 1
    hit = cache.get(CD3, m, None)
    assert hit.poly == q.poly and hit.highest == q.highest and hit.complete
    region = TruncationRegion(None, ((1, 0), (3, -2)))
    assert cache_key(CD3, m, region) != cache_key(CD3, m, None)
    assert TruncationRegion.from_dict(region.to_dict()) == region
    assert TruncationRegion.parse("1:0,3:-2") == region
    assert TruncationRegion.parse("s<=4") == TruncationRegion(4)
    assert cache.clear() == 1 and not cache.entries()


# ---------------------------------------------------------------- properties

def label_strategy(top=2):
    def build(args):
        n, variant, k, s = args
        if variant == "T":
            k = k[: n - 1] + (0,)
        else:
            k = tuple(0 if p != k.index(max(k)) else max(k) for p in range(n))
        return ModuleLabel(variant, s, k)

    return st.tuples(
        st.sampled_from([2, 3]),
        st.sampled_from(["T", "Ttilde"]),
        st.tuples(st.integers(0, top), st.integers(0, top), st.integers(0, top)),
        st.integers(-3, 3),
    ).map(lambda a: build((a[0], a[1], a[2][: a[0]], a[3]))).filter(lambda x: not x.is_trivial())


@settings(max_examples=1000, deadline=None)
@given(label_strategy())
def test_fm_invariants(label):
    cd = build_cartan(label.n)
    m_plus = highest_weight(label, cd)
    q = fm(cd, m_plus)
    assert q.complete
    assert q.poly.coefficient(m_plus) == 1
    assert all(c >= 1 for _, c in q.poly.items())
    assert enumerate_dominant(q) == [(m_plus, 1)]
    for m, _ in q.poly.items():
        assert leq(cd, m, m_plus)
    if len(m_plus.nodes()) == 1:
        assert all(is_right_negative(m) for m, _ in q.poly.items() if m != m_plus)


@settings(max_examples=1000, deadline=None)
@given(label_strategy(), st.integers(-6, 8), st.integers(-6, 8))
def test_truncation_is_restriction(label, b1, b2):
    cd = build_cartan(label.n)
    m_plus = highest_weight(label, cd)
    region = TruncationRegion(b1, ((label.n, b2),))
    full = fm(cd, m_plus)
    cut = fm(cd, m_plus, region)
    assert cut.poly == restrict_to_region(cd, full, region).poly
    assert cut.complete == (len(cut) == len(full))
    if cut.complete:
        assert cut.poly == full.poly
    if len(cut) <= 30 and certify_truncation(cd, m_plus, region, list(cut.poly.monomials())) and all(
        c == 1 for _, c in cut.poly.items()
    ):
        assert all(is_dominant(m) == (m == m_plus) for m in cut.poly.monomials())


@settings(max_examples=1000, deadline=None)
@given(label_strategy(1), label_strategy(1))
def test_iota_and_restriction_homomorphisms(a, b):
    ca = fm(build_cartan(a.n), highest_weight(a)).poly
    cb = fm(build_cartan(b.n), highest_weight(b)).poly
    n = 3
    assert iota(ca * cb, n) == iota(ca, n) * iota(cb, n)
    assert iota(iota(ca, n), n) == ca
    assert restrict_character(ca * cb) == restrict_character(ca) * restrict_character(cb)
    assert restrict_character(ca + cb) == restrict_character(ca) + restrict_character(cb)
