"""Rank-one q-characters: strings, KR modules and the node restrictions beta_j.

Rank-one monomials are ordinary :class:`Monomial` objects supported on
node 1.  Every function takes an optional ``step`` d: a node with
symmetrizer d behaves like sl_2 at q^d, so its strings are spaced by 2d and
A_t = Y_{t-d} Y_{t+d}.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian

from .errors import NotDominant
from .laurent import LaurentPoly
from .monomial import Monomial


@dataclass(frozen=True, order=True)
class Sl2String:
    """The string {a + d(k - 2i - 1) : i = 0..k-1}."""

    a_shift: int
    length: int
    step: int = 1

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("a string has positive length")

    def members(self) -> list:
        a, k, d = self.a_shift, self.length, self.step
        return [a + d * (k - 2 * i - 1) for i in range(k)]

    @property
    def top(self) -> int:
        return self.a_shift + self.step * (self.length - 1)

    @property
    def bottom(self) -> int:
        return self.a_shift - self.step * (self.length - 1)

    @classmethod
    def from_members(cls, top: int, length: int, step: int = 1) -> "Sl2String":
        return cls(top - step * (length - 1), length, step)


def _is_string(shifts: set, step: int) -> bool:
    lo, hi = min(shifts), max(shifts)
    if (hi - lo) % (2 * step):
        return False
    return len(shifts) == (hi - lo) // (2 * step) + 1


def general_position(s1: Sl2String, s2: Sl2String) -> bool:
    a, b = set(s1.members()), set(s2.members())
    if a <= b or b <= a:
        return True
    return not _is_string(a | b, s1.step)


def _rank_one_exponents(m) -> dict:
    if isinstance(m, Monomial):
        nodes = m.nodes()
        if len(nodes) > 1:
            raise ValueError("expected a rank-one monomial")
        return {s: e for (_, s), e in m.items()}
    return dict(m)


def string_decompose(m, step: int = 1) -> list:
    """Greedy decomposition of a dominant rank-one monomial into strings.

    Take the largest remaining shift and extend downwards while exponents
    allow.  The result is pairwise in general position; it is sorted by
    (top desc, length desc).
    """
    exps = _rank_one_exponents(m)
    if any(e < 0 for e in exps.values()):
        raise NotDominant(f"not dominant: {m}")
    exps = {s: e for s, e in exps.items() if e}
    out = []
    while exps:
        top = max(exps)
        k = 0
        while exps.get(top - 2 * step * k, 0) > 0:
            k += 1
        for j in range(k):
            s = top - 2 * step * j
            exps[s] -= 1
            if not exps[s]:
                del exps[s]
        out.append(Sl2String.from_members(top, k, step))
    out.sort(key=lambda st: (-st.top, -st.length))
    return out


def string_monomial(strings, node: int = 1) -> Monomial:
    acc: dict = {}
    for st in strings:
        for s in st.members():
            acc[(node, s)] = acc.get((node, s), 0) + 1
    return Monomial(acc)


def _a_inv(t: int, step: int, node: int = 1) -> Monomial:
    return Monomial((((node, t - step), -1), ((node, t + step), -1)))


def kr_lowering_steps(st: Sl2String) -> list:
    """Shifts t of the successive A_t^{-1} lowering the string's top weight."""
    a, k, d = st.a_shift, st.length, st.step
    return [a + d * (k - 2 * j) for j in range(k)]


def kr_qchar(a_shift: int, k: int, step: int = 1, node: int = 1) -> LaurentPoly:
    """q-character of the KR module W_k^{(a)}: k+1 monomials, coefficients 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return LaurentPoly.one()
    st = Sl2String(a_shift, k, step)
    m = string_monomial([st], node)
    terms = {m: 1}
    for t in kr_lowering_steps(st):
        m = m * _a_inv(t, step, node)
        terms[m] = 1
    return LaurentPoly(terms)


@lru_cache(maxsize=200_000)
def lowering_patterns(exps: tuple, step: int) -> tuple:
    """Monomials of the simple sl_2 character with highest weight ``exps``.

    ``exps`` is a canonical tuple of (shift, exponent) pairs.  Returns a tuple
    of (sorted tuple of A-shifts, multiplicity); the empty tuple stands for
    the highest weight itself.
    """
    strings = string_decompose(dict(exps), step)
    options = []
    for st in strings:
        steps = kr_lowering_steps(st)
        options.append([tuple(steps[:j]) for j in range(st.length + 1)])
    acc: dict = {}
    for combo in cartesian(*options):
        key = tuple(sorted(t for part in combo for t in part))
        acc[key] = acc.get(key, 0) + 1
    return tuple(sorted(acc.items(), key=lambda kv: (len(kv[0]), kv[0])))


def sl2_qchar(m, step: int = 1, node: int = 1) -> LaurentPoly:
    """q-character of the simple module with dominant highest weight m."""
    exps = _rank_one_exponents(m)
    if any(e < 0 for e in exps.values()):
        raise NotDominant(f"not dominant: {m}")
    out = LaurentPoly.one()
    for st in string_decompose(exps, step):
        out = out * kr_qchar(st.a_shift, st.length, step, node)
    return out


def beta(p, j: int) -> LaurentPoly:
    """Ring map keeping node j (renamed to node 1) and sending other nodes to 1."""
    if isinstance(p, Monomial):
        p = LaurentPoly.monomial(p)

    def restrict(m: Monomial) -> Monomial:
        return Monomial._make(tuple(((1, s), e) for (i, s), e in m.items() if i == j))

    return p.map_monomials(restrict)


def beta_monomial(m: Monomial, j: int) -> Monomial:
    return Monomial._make(tuple(((1, s), e) for (i, s), e in m.items() if i == j))
