"""Monomials in the variables Y_{i,s}, the A_{i,s} lattice and the order <=.

A monomial is stored as a sorted tuple of ``((i, s), e)`` pairs with
``e != 0``.  The spectral parameter ``a`` is fixed, so a variable is just a
node ``i`` and an integer shift ``s`` (written ``i_s``).
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

from .cartan import CartanData
from .errors import Undefined

_TOKEN = re.compile(r"^(\d+)_(-?\d+)(?:\^(-?\d+))?$")


class Monomial:
    """Immutable element of the free abelian group generated by Y_{i,s}."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents: Mapping | Iterable = ()):
        acc: dict = {}
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        for key, e in pairs:
            i, s = key
            key = (int(i), int(s))
            acc[key] = acc.get(key, 0) + int(e)
        self._items = tuple(sorted((k, e) for k, e in acc.items() if e))
        self._hash = hash(self._items)

    @classmethod
    def _make(cls, items: tuple) -> "Monomial":
        # items must already be canonical
        obj = object.__new__(cls)
        obj._items = items
        obj._hash = hash(items)
        return obj

    @classmethod
    def unit(cls) -> "Monomial":
        return _UNIT

    @classmethod
    def y(cls, i: int, s: int, e: int = 1) -> "Monomial":
        return cls._make((((i, s), e),)) if e else _UNIT

    # basic protocol

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._hash == other._hash and self._items == other._items

    def __lt__(self, other: "Monomial"):
        return self._items < other._items

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Monomial({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    # group operations

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        if not other._items:
            return self
        if not self._items:
            return other
        d = dict(self._items)
        for k, e in other._items:
            v = d.get(k, 0) + e
            if v:
                d[k] = v
            else:
                del d[k]
        return Monomial._make(tuple(sorted(d.items())))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> "Monomial":
        if k == 0:
            return _UNIT
        return Monomial._make(tuple((key, e * k) for key, e in self._items))

    def inverse(self) -> "Monomial":
        return Monomial._make(tuple((key, -e) for key, e in self._items))

    # accessors

    def items(self):
        """Canonical ``((i, s), e)`` pairs."""
        return self._items

    def exponent(self, i: int, s: int) -> int:
        for key, e in self._items:
            if key == (i, s):
                return e
        return 0

    def as_dict(self) -> dict:
        return dict(self._items)

    def is_unit(self) -> bool:
        return not self._items

    def nodes(self) -> set:
        return {i for (i, _), _ in self._items}

    def shifts(self) -> set:
        return {s for (_, s), _ in self._items}

    def node_part(self, j: int) -> dict:
        """Shift -> exponent map of the variables at node j."""
        return {s: e for (i, s), e in self._items if i == j}

    def map_variables(self, f) -> "Monomial":
        """Image under ``Y_{i,s} -> Y_{f(i,s)}^{sign}`` where f returns (i', s', sign)."""
        acc = []
        for (i, s), e in self._items:
            i2, s2, sign = f(i, s)
            acc.append(((i2, s2), sign * e))
        return Monomial(acc)

    # serialization

    def to_text(self) -> str:
        if not self._items:
            return "1"
        out = []
        for (i, s), e in self._items:
            out.append(f"{i}_{s}" if e == 1 else f"{i}_{s}^{e}")
        return " ".join(out)

    @classmethod
    def from_text(cls, text: str) -> "Monomial":
        text = text.strip()
        if text in ("", "1"):
            return _UNIT
        pairs = []
        for tok in text.replace("*", " ").split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad monomial token {tok!r}")
            e = int(m.group(3)) if m.group(3) is not None else 1
            pairs.append(((int(m.group(1)), int(m.group(2))), e))
        return cls(pairs)

    def to_dict(self) -> dict:
        return {"factors": [{"i": i, "s": s, "e": e} for (i, s), e in self._items]}

    @classmethod
    def from_dict(cls, data) -> "Monomial":
        return cls(((f["i"], f["s"]), f.get("e", 1)) for f in data["factors"])


_UNIT = Monomial._make(())


def mul(a: Monomial, b: Monomial) -> Monomial:
    return a * b


def monomial_product(factors: Iterable[Monomial]) -> Monomial:
    d: dict = {}
    for m in factors:
        for k, e in m.items():
            d[k] = d.get(k, 0) + e
    return Monomial(d)


def a_monomial(cd: CartanData, i: int, s: int) -> Monomial:
    """The simple-root monomial A_{i,s}."""
    if not 1 <= i <= cd.rank:
        raise ValueError(f"node {i} out of range 1..{cd.rank}")
    return Monomial(_a_items(cd, i, s))


def _a_items(cd: CartanData, i: int, s: int) -> list:
    di = cd.di(i)
    items = [((i, s + di), 1), ((i, s - di), 1)]
    for j in cd.nodes:
        if j == i:
            continue
        cji = cd.c(j, i)
        if cji == -1:
            items.append(((j, s), -1))
        elif cji == -2:
            items.append(((j, s + 1), -1))
            items.append(((j, s - 1), -1))
        elif cji < -2:
            raise ValueError("Cartan entries below -2 are not supported")
    return items


def is_j_dominant(m: Monomial, j: int) -> bool:
    return all(e >= 0 for (i, _), e in m.items() if i == j)


def is_dominant(m: Monomial) -> bool:
    return all(e >= 0 for _, e in m.items())


def is_antidominant(m: Monomial) -> bool:
    return all(e <= 0 for _, e in m.items())


def is_right_negative(m: Monomial) -> bool:
    """All variables at the largest occurring shift have exponent <= 0."""
    items = m.items()
    if not items:
        raise Undefined("right-negativity is undefined for the unit monomial")
    top = max(s for (_, s), _ in items)
    return all(e <= 0 for (_, s), e in items if s == top)


class ALatticePoint:
    """Integer exponents c_{i,s} of a product of A_{i,s}'s."""

    __slots__ = ("_items", "_hash")

    def __init__(self, mult: Mapping | Iterable = ()):
        acc: dict = {}
        pairs = mult.items() if isinstance(mult, Mapping) else mult
        for (i, s), v in pairs:
            acc[(int(i), int(s))] = acc.get((int(i), int(s)), 0) + int(v)
        self._items = tuple(sorted((k, v) for k, v in acc.items() if v))
        self._hash = hash(self._items)

    def items(self):
        return self._items

    def as_dict(self) -> dict:
        return dict(self._items)

    def __eq__(self, other):
        return isinstance(other, ALatticePoint) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ALatticePoint({dict(self._items)!r})"

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for _, v in self._items)

    def recompose(self, cd: CartanData) -> Monomial:
        acc: dict = {}
        for (i, s), v in self._items:
            for key, e in _a_items(cd, i, s):
                acc[key] = acc.get(key, 0) + e * v
        return Monomial(acc)


def v_total(p: ALatticePoint) -> int:
    return sum(v for _, v in p.items())


def v_node(p: ALatticePoint, i: int) -> int:
    return sum(v for (j, _), v in p.items() if j == i)


def decompose_in_a_lattice(cd: CartanData, m: Monomial) -> ALatticePoint | None:
    """Write m as a product of A_{i,s}^{c} if possible.

    The variable of largest shift in A_{i,s} is Y_{i,s+d_i} and it is the only
    one at that shift, so peeling off the top shift of m determines the
    exponents one level at a time.
    """
    cur = m.as_dict()
    if not cur:
        return ALatticePoint()
    floor = min(s for _, s in cur) + 2
    result: dict = {}
    while cur:
        top = max(s for _, s in cur)
        if top < floor:
            return None
        for (i, s), e in [(k, e) for k, e in cur.items() if k[1] == top]:
            if i > cd.rank or i < 1:
                return None
            c = e
            base = top - cd.di(i)
            result[(i, base)] = result.get((i, base), 0) + c
            for key, a in _a_items(cd, i, base):
                v = cur.get(key, 0) - c * a
                if v:
                    cur[key] = v
                else:
                    cur.pop(key, None)
    return ALatticePoint(result)


def leq(cd: CartanData, m: Monomial, m2: Monomial) -> bool:
    """m <= m2 iff m2 / m is a product of A_{i,s} with nonnegative exponents."""
    p = decompose_in_a_lattice(cd, m2 / m)
    return p is not None and p.is_nonnegative()
