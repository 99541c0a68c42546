"""Finite integer combinations of monomials."""
from __future__ import annotations

import heapq
from typing import Iterable, Mapping

from .monomial import Monomial


class LaurentPoly:
    """Sparse Laurent polynomial in the variables Y_{i,s}.

    Coefficients are Python ints; zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in pairs:
            if c:
                acc[m] = acc.get(m, 0) + c
        self._terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def _wrap(cls, terms: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._wrap({Monomial.unit(): 1})

    @classmethod
    def monomial(cls, m: Monomial, c: int = 1) -> "LaurentPoly":
        return cls._wrap({m: c} if c else {})

    # container protocol

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __contains__(self, m):
        return m in self._terms

    def __getitem__(self, m):
        return self._terms.get(m, 0)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: t[0].items())

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self == LaurentPoly.one() * other if other else not self._terms
        return NotImplemented

    def __repr__(self):
        return f"LaurentPoly({self.to_text()!r})"

    def to_text(self, limit: int | None = None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms()[:limit]:
            parts.append(m.to_text() if c == 1 else f"{c}*{m.to_text()}")
        if limit is not None and len(self._terms) > limit:
            parts.append("...")
        return " + ".join(parts)

    # ring operations

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return LaurentPoly._wrap(out)

    def __neg__(self):
        return LaurentPoly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def scale(self, k: int) -> "LaurentPoly":
        if not k:
            return LaurentPoly()
        return LaurentPoly._wrap({m: c * k for m, c in self._terms.items()})

    def shift_by(self, m: Monomial) -> "LaurentPoly":
        """Multiply every term by the monomial m."""
        return LaurentPoly._wrap({t * m: c for t, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Monomial):
            return self.shift_by(other)
        if len(self._terms) < len(other._terms):
            small, big = self._terms, other._terms
        else:
            small, big = other._terms, self._terms
        if len(small) * len(big) > _PACK_THRESHOLD:
            return _packed_product(small, big)
        out: dict = {}
        get = out.get
        for m1, c1 in small.items():
            for m2, c2 in big.items():
                m = m1 * m2
                out[m] = get(m, 0) + c1 * c2
        return LaurentPoly._wrap({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def map_monomials(self, f) -> "LaurentPoly":
        """Image under a multiplicative map on monomials; coefficients add up."""
        out: dict = {}
        for m, c in self._terms.items():
            t = f(m)
            out[t] = out.get(t, 0) + c
        return LaurentPoly._wrap({m: c for m, c in out.items() if c})

    def filter(self, pred) -> "LaurentPoly":
        return LaurentPoly._wrap({m: c for m, c in self._terms.items() if pred(m)})

    # serialization

    def to_dict(self) -> dict:
        return {"terms": [{"m": m.to_dict(), "c": c} for m, c in self.sorted_terms()]}

    @classmethod
    def from_dict(cls, data) -> "LaurentPoly":
        return cls((Monomial.from_dict(t["m"]), t["c"]) for t in data["terms"])


_PACK_THRESHOLD = 2000


def _packed_product(a: dict, b: dict) -> "LaurentPoly":
    """Product with monomials packed into integers (Kronecker substitution).

    Each variable gets a w-bit signed digit; multiplying monomials becomes
    adding integers, which is exact as long as every exponent of the product
    fits in a digit.
    """
    variables = sorted({v for m in list(a) + list(b) for v, _ in m.items()})
    index = {v: p for p, v in enumerate(variables)}
    top = max(abs(e) for m in list(a) + list(b) for _, e in m.items())
    w = (2 * top + 1).bit_length() + 1

    def pack(m):
        return sum(e << (w * index[v]) for v, e in m.items())

    pa = [(pack(m), c) for m, c in a.items()]
    pb = [(pack(m), c) for m, c in b.items()]
    out: dict = {}
    get = out.get
    for k1, c1 in pa:
        for k2, c2 in pb:
            k = k1 + k2
            out[k] = get(k, 0) + c1 * c2
    half = 1 << (w - 1)
    mask = (1 << w) - 1
    terms = {}
    for k, c in out.items():
        if not c:
            continue
        items = []
        p = 0
        while k:
            d = k & mask
            if d >= half:
                d -= 1 << w
            if d:
                items.append((variables[p], d))
            k = (k - d) >> w
            p += 1
        terms[Monomial._make(tuple(items))] = c
    return LaurentPoly._wrap(terms)


def product(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly.one()
    for p in polys:
        out = out * p
    return out


def _lex_key(m: Monomial, order: dict) -> tuple:
    v = [0] * len(order)
    for var, e in m.items():
        v[order[var]] = e
    return tuple(v)


def exact_divide(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """The Laurent polynomial q with den * q = num, or NonExactDivision.

    Long division under a lexicographic monomial order: the leading term of
    the remainder fixes the next quotient term.  Every quotient term must lie
    between lead(num)/lead(den) and trail(num)/trail(den), which bounds the
    loop when the division is not exact.
    """
    from .errors import NonExactDivision

    if den.is_zero():
        raise NonExactDivision("division by zero")
    if num.is_zero():
        return LaurentPoly()
    variables = sorted({v for m in list(num.monomials()) + list(den.monomials()) for v, _ in m.items()})
    order = {v: i for i, v in enumerate(variables)}

    def key(m):
        return tuple(-x for x in _lex_key(m, order))

    den_terms = sorted(den.items(), key=lambda t: key(t[0]))
    lead_m, lead_c = den_terms[0]
    trail_m = den_terms[-1][0]
    num_sorted = sorted(num.monomials(), key=key)
    floor = _lex_key(num_sorted[-1] / trail_m, order)
    rem = dict(num.items())
    heap = [(key(m), m) for m in rem]
    heapq.heapify(heap)
    quotient: dict = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = rem.get(m, 0)
        if not c:
            continue
        q_m = m / lead_m
        if _lex_key(q_m, order) < floor:
            raise NonExactDivision(f"remainder term {m} cannot be cancelled")
        if c % lead_c:
            raise NonExactDivision(f"coefficient {c} not divisible by {lead_c}")
        q_c = c // lead_c
        quotient[q_m] = quotient.get(q_m, 0) + q_c
        for d_m, d_c in den_terms:
            t = q_m * d_m
            v = rem.get(t, 0) - q_c * d_c
            if v:
                if t not in rem:
                    heapq.heappush(heap, (key(t), t))
                rem[t] = v
            else:
                rem.pop(t, None)
    return LaurentPoly._wrap({m: c for m, c in quotient.items() if c})
