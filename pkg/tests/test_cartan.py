import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcluster.cartan import CartanData, build_cartan, build_sl2, build_type_c
from qcluster.errors import InvalidRank


def root_data_cartan(n):
    """C_ij = 2(a_i, a_j)/(a_i, a_i) from the standard realisation of C_n.

    a_i = e_i - e_{i+1} for i < n and a_n = 2 e_n.
    """
    roots = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        roots.append(v)
    last = [0] * n
    last[-1] = 2
    roots.append(last)

    def dot(u, v):
        return sum(a * b for a, b in zip(u, v))

    return [[Fraction(2 * dot(a, b), dot(a, a)) for b in roots] for a in roots]


def test_c3_matrix():
    cd = build_type_c(3)
    assert [list(r) for r in cd.C] == [[2, -1, 0], [-1, 2, -2], [0, -1, 2]]
    assert cd.d == (1, 1, 2)


def test_c2_matrix():
    cd = build_type_c(2)
    assert [list(r) for r in cd.C] == [[2, -2], [-1, 2]]
    assert cd.d == (1, 2)


@pytest.mark.parametrize("n", range(2, 9))
def test_matches_root_data(n):
    cd = build_type_c(n)
    assert [[Fraction(x) for x in r] for r in cd.C] == root_data_cartan(n)


@pytest.mark.parametrize("n", [0, 1, -3])
def test_small_rank_rejected(n):
    with pytest.raises(InvalidRank):
        build_type_c(n)


def test_sl2():
    cd = build_sl2()
    assert cd.C == ((2,),) and cd.d == (1,)
    assert build_cartan(1) == cd


def test_json_round_trip():
    cd = build_type_c(4)
    data = json.loads(cd.to_json())
    assert data == {"rank": 4, "C": [list(r) for r in cd.C], "d": [1, 1, 1, 2]}
    assert CartanData.from_dict(data) == cd


@settings(max_examples=1000, deadline=None)
@given(st.integers(2, 40))
def test_invariants(n):
    cd = build_type_c(n)
    assert cd == build_type_c(n)
    minus_two = []
    for i in cd.nodes:
        assert cd.c(i, i) == 2
        for j in cd.nodes:
            assert cd.b(i, j) == cd.b(j, i)
            if i != j:
                assert cd.c(i, j) <= 0
                if abs(i - j) == 1:
                    assert cd.c(i, j) == (-2 if (i, j) == (n - 1, n) else -1)
                else:
                    assert cd.c(i, j) == 0
            if cd.c(i, j) == -2:
                minus_two.append((i, j))
    assert minus_two == [(n - 1, n)]
    assert cd.d == (1,) * (n - 1) + (2,)
