"""Minimal affinizations of type C_n: labels, highest weights, the catalog of
three-term equations among them, verification of those equations by
q-characters, and the predicted dominant monomials of every summand."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cartan import CartanData, build_cartan
from .errors import ConstraintViolated, InvalidLabel, Unsupported
from .laurent import LaurentPoly, product
from .monomial import Monomial, a_monomial, decompose_in_a_lattice, monomial_product
from .qchar import (
    CharacterCache,
    QCharacter,
    TruncationRegion,
    compute_character,
    enumerate_antidominant,
    enumerate_dominant,
    iota,
    iota_monomial,
    restrict_character,
)

VARIANTS = ("T", "Ttilde", "S", "Stilde", "sl2")
MIRROR = {"T": "Ttilde", "Ttilde": "T", "S": "Stilde", "Stilde": "S", "sl2": "sl2"}


# ---------------------------------------------------------------- labels


@dataclass(frozen=True)
class ModuleLabel:
    """A minimal affinization T, T~, S, S~ at shift s with multiplicities k.

    The variant ``sl2`` is the rank-one Kirillov-Reshetikhin module with
    highest weight prod_{i<k} Y_{s+k-2i-1}; its k is the 1-tuple (k,).
    """

    variant: str
    s: int
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))

    @property
    def n(self) -> int:
        return len(self.k)

    def validate(self) -> "ModuleLabel":
        if self.variant not in VARIANTS:
            raise InvalidLabel(f"unknown variant {self.variant!r}")
        if any(x < 0 for x in self.k):
            raise InvalidLabel(f"negative multiplicity in {self.to_text()}")
        if self.variant == "sl2":
            if self.n != 1:
                raise InvalidLabel("sl2 labels carry a single length")
            return self
        if self.n < 2:
            raise InvalidLabel("type C labels need rank >= 2")
        if self.variant in ("S", "Stilde"):
            if self.k[-1] != 0:
                raise InvalidLabel("S labels need k_n = 0")
            if self.k[-2] < 1:
                raise InvalidLabel("S labels need k_{n-1} >= 1")
        return self

    def mirror(self) -> "ModuleLabel":
        """The label whose character is the iota-image of this one."""
        return ModuleLabel(MIRROR[self.variant], self.s, self.k)

    @property
    def is_tilde(self) -> bool:
        return self.variant in ("Ttilde", "Stilde")

    def is_trivial(self) -> bool:
        return not any(self.k)

    def to_text(self) -> str:
        return f"{self.variant}:{self.s}:{','.join(str(x) for x in self.k)}"

    def __str__(self):
        return self.to_text()

    @classmethod
    def parse(cls, text: str) -> "ModuleLabel":
        parts = text.strip().split(":")
        if len(parts) != 3:
            raise InvalidLabel(f"expected VARIANT:s:k1,...,kn, got {text!r}")
        variant, s, ks = parts
        try:
            label = cls(variant, int(s), tuple(int(x) for x in ks.split(",")))
        except ValueError as exc:
            raise InvalidLabel(f"cannot parse label {text!r}") from exc
        return label.validate()

    def to_dict(self) -> dict:
        return {"variant": self.variant, "s": self.s, "k": list(self.k)}

    @classmethod
    def from_dict(cls, data) -> "ModuleLabel":
        return cls(data["variant"], int(data["s"]), tuple(data["k"])).validate()


def T(s: int, *k) -> ModuleLabel:
    return ModuleLabel("T", s, k)


def Tt(s: int, *k) -> ModuleLabel:
    return ModuleLabel("Ttilde", s, k)


def St(s: int, *k) -> ModuleLabel:
    return ModuleLabel("Stilde", s, k)


def _tilde_shifts(s: int, k: tuple) -> list:
    """(node, shift) pairs of T~^{(s)}_k: node n first, then n-1 down to 1."""
    n = len(k)
    out = [(n, s + 4 * i) for i in range(k[n - 1])]
    base = s + 4 * k[n - 1]
    for j in range(1, n):
        node = n - j
        for i in range(k[node - 1]):
            out.append((node, base + 2 * i + j))
        base += 2 * k[node - 1]
    return out


def _second_factor(k: tuple) -> tuple | None:
    """Multiplicities of the second T-factor of an S-weight, None if trivial.

    k_{n-1} is cleared; the last nonzero entry below n-1 loses 2, or, when it
    equals 1, is cleared and the nonzero entry before it loses 1.
    """
    n = len(k)
    rest = list(k[: n - 2])
    nz = [p for p, x in enumerate(rest) if x]
    if not nz:
        return None
    last = nz[-1]
    if rest[last] >= 2:
        rest[last] -= 2
    else:
        rest[last] = 0
        if len(nz) < 2:
            return None
        rest[nz[-2]] -= 1
    if not any(rest):
        return None
    return tuple(rest) + (0, 0)


def highest_weight(label: ModuleLabel, cd: CartanData | None = None) -> Monomial:
    label.validate()
    if cd is not None and label.variant != "sl2" and cd.rank != label.n:
        raise InvalidLabel(f"label rank {label.n} does not match Cartan rank {cd.rank}")
    v, s, k = label.variant, label.s, label.k
    if v == "sl2":
        return monomial_product(Monomial.y(1, s + k[0] - 2 * i - 1) for i in range(k[0]))
    if v in ("Ttilde", "Stilde"):
        sign = 1
    else:
        sign = -1
    pairs = _tilde_shifts(s, k)
    if v in ("S", "Stilde"):
        second = _second_factor(k)
        if second is not None:
            pairs += _tilde_shifts(s + 2 * k[-2] + 4, second)
    return monomial_product(Monomial.y(i, sign * t) for i, t in pairs)


def _single_block(k: tuple) -> list:
    return [p + 1 for p, x in enumerate(k) if x]


def is_known_special(label: ModuleLabel) -> bool:
    """Labels whose modules are special: FM computes their characters directly.

    T with k_n = 0, single-node modules of either kind, and the T~ / S~
    families with k_n >= 1 listed by the specialness theorem.
    """
    v, k = label.variant, label.k
    if v == "sl2" or label.is_trivial():
        return True
    support = _single_block(k)
    if len(support) == 1:
        return v in ("T", "Ttilde")
    if v == "T":
        return k[-1] == 0
    if v == "Ttilde":
        return k[-1] >= 1 and special_family(k) is not None
    if v == "Stilde":
        return k[-1] == 0 and special_family(k) is not None
    return False


def special_family(k: tuple) -> str | None:
    """Which clause of the specialness theorem covers T~_k (k_n >= 1) or S~_k (k_n = 0).

    Returns 'a', 'b', 'c', 'd' or None.  The clauses:
      a: one nonzero entry below n;
      b: entries at n-j < n-i with k_{n-j} <= i+1;
      c: a prefix k_1..k_m and one entry k_l (l <= n-1) with k_1+..+k_m <= n-l+1;
      d: S~ with a prefix, an entry k_l (l <= n-2), k_{n-1} >= 1 and the same bound.
    """
    n = len(k)
    if k[-1] >= 1:
        below = _single_block(k[:-1])
        if len(below) <= 1:
            return "a"
        if len(below) == 2:
            p, q = below
            i = n - q
            if k[p - 1] <= i + 1:
                return "b"
        l = below[-1]
        if sum(k[: l - 1]) <= n - l + 1:
            return "c"
        return None
    if k[-2] >= 1:
        below = _single_block(k[:-2])
        if not below:
            return "d"
        l = below[-1]
        if l <= n - 2 and sum(k[: l - 1]) <= n - l + 1:
            return "d"
    return None


# ---------------------------------------------------------------- equation catalog

PRIMAL_FAMILIES = ("eqn1", "eqn2", "eqn3", "eqn4", "eqn511", "eqn512", "eqn5211", "eqn5221")
DUAL_OF = {
    "eqn1": "eqn6",
    "eqn2": "eqn7",
    "eqn3": "eqn8",
    "eqn4": "eqn9",
    "eqn511": "eqn511d",
    "eqn512": "eqn512d",
    "eqn5211": "eqn5211d",
    "eqn5221": "eqn5221d",
}
PRIMAL_OF = {v: k for k, v in DUAL_OF.items()}
FAMILIES = PRIMAL_FAMILIES + tuple(DUAL_OF.values())


@dataclass(frozen=True)
class EquationInstance:
    """[lhs0][lhs1] = [rhs_first0][rhs_first1] + prod(rhs_second).

    ``k`` is the multiplicity vector of the second left factor and ``s`` the
    family shift; ``params`` holds the derived indices (i, j, l, m, prefix).
    """

    family: str
    n: int
    s: int
    k: tuple
    lhs: tuple
    rhs_first: tuple
    rhs_second: tuple
    params: tuple = ()

    @property
    def is_dual(self) -> bool:
        return self.family in PRIMAL_OF

    def slots(self) -> list:
        return list(self.lhs) + list(self.rhs_first) + list(self.rhs_second)

    def param_dict(self) -> dict:
        return dict(self.params)

    def to_text(self) -> str:
        def br(labels):
            return "".join(f"[{x.to_text()}]" for x in labels)

        return f"{br(self.lhs)} = {br(self.rhs_first)} + {br(self.rhs_second)}"

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "s": self.s,
            "k": list(self.k),
            "params": {a: (list(b) if isinstance(b, tuple) else b) for a, b in self.params},
            "lhs": [x.to_text() for x in self.lhs],
            "rhs_first": [x.to_text() for x in self.rhs_first],
            "rhs_second": [x.to_text() for x in self.rhs_second],
        }


def _vec(n: int, entries: dict) -> tuple:
    v = [0] * n
    for p, x in entries.items():
        v[p - 1] += x
    return tuple(v)


def _with(k: tuple, **changes) -> tuple:
    """Copy of k with 1-based positions p_<pos>=value replaced."""
    v = list(k)
    for key, x in changes.items():
        v[int(key[1:]) - 1] = x
    return tuple(v)


def _add(k: tuple, pos: int, delta: int) -> tuple:
    v = list(k)
    v[pos - 1] += delta
    return tuple(v)


def _fail(family: str, clause: str):
    raise ConstraintViolated(f"{family}: {clause}")


def _check_k(family: str, n: int, k: tuple):
    if n < 3:
        _fail(family, "the catalog needs n >= 3")
    if len(k) != n:
        _fail(family, f"k must have {n} entries")
    if any(x < 0 for x in k):
        _fail(family, "all k_i >= 0")


def _primal_t(family: str, n: int, s: int, k: tuple) -> tuple:
    """Slots of eqn1..eqn4, with k the second left factor (k_n = 0)."""
    if k[-1] != 0:
        _fail(family, "k_n = 0")
    nz = _single_block(k)
    lab = lambda v: T(s, *v)  # noqa: E731
    if family == "eqn1":
        if k[0] < 1 or k[1] < 1:
            _fail(family, "k_1, k_2 >= 1")
        lhs = (_add(k, 2, -1), k)
        rf = (_add(k, 1, -1), _add(_add(k, 1, 1), 2, -1))
        rs = (_with(_add(k, 2, -1), p1=0), _with(k, p1=0, p2=k[0] + k[1]))
        params = ()
    elif family == "eqn2":
        if not nz:
            _fail(family, "k_i, k_{i+1} >= 1")
        i = nz[0]
        if not (1 < i <= n - 2):
            _fail(family, "1 < i <= n-2 with k_1 = .. = k_{i-1} = 0")
        if k[i] < 1:
            _fail(family, "k_i, k_{i+1} >= 1")
        ki, ki1 = k[i - 1], k[i]
        lhs = (_add(k, i + 1, -1), k)
        rf = (_add(_add(k, i, 1), i + 1, -1), _add(k, i, -1))
        rs = (
            _with(k, **{f"p{i}": 0, f"p{i + 1}": ki + ki1}),
            _with(k, **{f"p{i - 1}": ki, f"p{i}": 0, f"p{i + 1}": ki1 - 1}),
        )
        params = (("i", i),)
    elif family == "eqn3":
        if k[0] < 1 or len(nz) < 2:
            _fail(family, "k_1, k_j > 0")
        j = nz[1]
        if not (2 < j <= n - 1):
            _fail(family, "2 < j <= n-1 with k_2 = .. = k_{j-1} = 0")
        lhs = (_add(k, j, -1), k)
        rf = (_add(_add(k, 1, 1), j, -1), _add(k, 1, -1))
        rs = (_with(k, p1=0, p2=k[0]), _with(_add(k, j, -1), p1=0))
        params = (("j", j),)
    elif family == "eqn4":
        if len(nz) < 2:
            _fail(family, "k_i, k_j > 0")
        i, j = nz[0], nz[1]
        if not (2 < i + 1 < j <= n - 1):
            _fail(family, "2 < i+1 < j <= n-1 with zeros elsewhere below j")
        ki = k[i - 1]
        lhs = (_add(k, j, -1), k)
        rf = (_add(k, i, -1), _add(_add(k, i, 1), j, -1))
        rs = (
            _with(k, **{f"p{i}": 0, f"p{i + 1}": ki}),
            _with(_add(k, j, -1), **{f"p{i}": 0, f"p{i - 1}": ki}),
        )
        params = (("i", i), ("j", j))
    else:  # pragma: no cover
        raise Unsupported(family)
    return tuple(map(lab, lhs)), tuple(map(lab, rf)), tuple(map(lab, rs)), params


def _decrement_last(prefix: tuple) -> tuple:
    nz = [p for p, x in enumerate(prefix) if x]
    if not nz:
        return prefix
    v = list(prefix)
    v[nz[-1]] -= 1
    return tuple(v)


def _primal_tilde(family: str, n: int, s: int, k: tuple) -> tuple:
    """Slots of eqn511..eqn5221, with k the second left factor (k_n >= 1)."""
    kn = k[-1]
    if kn < 1:
        _fail(family, "k_n >= 1")
    a = k[n - 2]

    def pad(front: tuple, tail: dict) -> tuple:
        v = list(front) + [0] * (n - len(front))
        for p, x in tail.items():
            v[p - 1] = x
        return tuple(v)

    if family in ("eqn511", "eqn512"):
        prefix = k[: n - 2]
        if sum(prefix) > 2:
            _fail(family, "k_1 + .. + k_m <= 2")
        if family == "eqn511":
            if a != 1:
                _fail(family, "k_{n-1} = 1")
            lo = _decrement_last(prefix)
            lhs = (Tt(s, *pad(lo, {n: kn})), Tt(s - 4, *k))
            rf = (Tt(s, *pad(prefix, {n - 1: 1, n: kn - 1})), Tt(s - 4, *pad(lo, {n: kn + 1})))
            rs = (Tt(s + 4 * kn, *pad(lo, {})), Tt(s - 4, *pad(prefix, {n - 1: 2 * kn + 1})))
        else:
            if a < 2:
                _fail(family, "k_{n-1} >= 2")
            lhs = (Tt(s, *pad(prefix, {n - 1: a - 2, n: kn})), Tt(s - 4, *k))
            rf = (Tt(s, *pad(prefix, {n - 1: a, n: kn - 1})), Tt(s - 4, *pad(prefix, {n - 1: a - 2, n: kn + 1})))
            rs = (Tt(s + 4 * kn, *pad(prefix, {n - 1: a - 2})), Tt(s - 4, *pad(prefix, {n - 1: 2 * kn + a})))
        nzp = _single_block(prefix)
        params = (("m", nzp[-1] if nzp else 0), ("prefix", tuple(prefix[: (nzp[-1] if nzp else 0)])))
        return lhs, rf, rs, params
    if a != 0:
        _fail(family, "k_{n-1} = 0")
    nz = _single_block(k[: n - 2])
    if not nz:
        _fail(family, "some k_l >= 1 with l <= n-2")
    l = nz[-1]
    b = k[l - 1]
    prefix = k[: l - 1]
    if sum(prefix) > n - l + 1:
        _fail(family, "k_1 + .. + k_m <= n-l+1")
    if family == "eqn5211":
        if b != 1:
            _fail(family, "k_l = 1")
        lo = _decrement_last(prefix)
        lhs = (Tt(s, *pad(lo, {n: kn})), Tt(s - 4, *k))
        rf = (Tt(s, *pad(prefix, {l: 1, n: kn - 1})), Tt(s - 4, *pad(lo, {n: kn + 1})))
        rs = (St(s - 4, *pad(prefix, {l: 1, n - 1: 2 * kn})),)
    else:
        if b < 2:
            _fail(family, "k_l >= 2")
        lhs = (Tt(s, *pad(prefix, {l: b - 2, n: kn})), Tt(s - 4, *k))
        rf = (Tt(s, *pad(prefix, {l: b, n: kn - 1})), Tt(s - 4, *pad(prefix, {l: b - 2, n: kn + 1})))
        rs = (St(s - 4, *pad(prefix, {l: b, n - 1: 2 * kn})),)
    nzp = _single_block(prefix)
    params = (("l", l), ("m", nzp[-1] if nzp else 0), ("prefix", tuple(prefix[: (nzp[-1] if nzp else 0)])))
    return lhs, rf, rs, params


def make_equation(family: str, n: int, s: int, k) -> EquationInstance:
    """Instantiate a family at (n, s, k); k is the second left factor's multiplicities."""
    if family not in FAMILIES:
        raise ConstraintViolated(f"unknown family {family!r}")
    k = tuple(int(x) for x in k)
    primal = PRIMAL_OF.get(family, family)
    _check_k(family, n, k)
    if primal in ("eqn1", "eqn2", "eqn3", "eqn4"):
        lhs, rf, rs, params = _primal_t(primal, n, s, k)
    else:
        lhs, rf, rs, params = _primal_tilde(primal, n, s, k)
    if family != primal:
        lhs, rf, rs = (tuple(x.mirror() for x in part) for part in (lhs, rf, rs))
    return EquationInstance(family, n, s, k, lhs, rf, rs, params)


def dual_equation(eq: EquationInstance) -> EquationInstance:
    """The instance of the mirrored family at the same parameters."""
    other = DUAL_OF.get(eq.family) or PRIMAL_OF[eq.family]
    return make_equation(other, eq.n, eq.s, eq.k)


def infer_family(n: int, k, dual: bool = False) -> str | None:
    """The family whose second left factor has multiplicities k, if any."""
    for fam in PRIMAL_FAMILIES:
        try:
            make_equation(fam, n, 0, k)
        except ConstraintViolated:
            continue
        return DUAL_OF[fam] if dual else fam
    return None


def enumerate_instances(n: int, max_sum: int, s: int = 0, dual: bool = False) -> list:
    """Every catalog instance with second left factor of total weight <= max_sum."""
    from itertools import product as cartesian

    out = []
    for k in cartesian(range(max_sum + 1), repeat=n):
        if sum(k) > max_sum or not any(k):
            continue
        fam = infer_family(n, k, dual)
        if fam is not None:
            out.append(make_equation(fam, n, s, k))
    return out


# ---------------------------------------------------------------- characters


@dataclass
class CharacterEngine:
    """Computes slot characters: FM for special labels, iota of the mirror otherwise."""

    cd: CartanData
    cache: CharacterCache | None = None
    budget: int | None = None
    force_iota: bool = False
    _memo: dict = field(default_factory=dict)

    def route(self, label: ModuleLabel) -> str:
        if label.is_trivial():
            return "unit"
        if self.force_iota or not is_known_special(label):
            return "iota"
        return "fm"

    def character(self, label: ModuleLabel, region: TruncationRegion | None = None) -> QCharacter:
        key = (label, region)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        route = self.route(label)
        hw = highest_weight(label, self.cd)
        if route == "unit":
            q = QCharacter(LaurentPoly.one(), hw, region, True, self.cd.rank)
        elif route == "fm":
            q = compute_character(self.cd, hw, region, self.budget, self.cache)
        else:
            mirror = compute_character(self.cd, highest_weight(label.mirror(), self.cd), None, self.budget, self.cache)
            q = iota(mirror, self.cd.rank)
            if region is not None:
                q = restrict_to_region(self.cd, q, region)
        self._memo[key] = q
        return q


def restrict_to_region(cd: CartanData, q: QCharacter, region: TruncationRegion) -> QCharacter:
    """Keep the monomials hw * prod A^{-1}_{i,t} with every (i, t) in region."""
    hw = q.highest

    def inside(m: Monomial) -> bool:
        p = decompose_in_a_lattice(cd, hw / m)
        return p is not None and all(region.contains(i, t) for (i, t), _ in p.items())

    poly = q.poly.filter(inside)
    return QCharacter(poly, hw, region, len(poly) == len(q.poly), q.rank)


def auto_region(cd: CartanData, m_plus: Monomial) -> TruncationRegion:
    """Smallest per-node region whose complement is right-negative for m_plus."""
    top = max(m_plus.shifts())
    return TruncationRegion(None, tuple((i, top - cd.di(i)) for i in cd.nodes))


@dataclass
class VerificationReport:
    equation: EquationInstance
    verdict: str
    residual: LaurentPoly
    lhs_terms: int
    rhs_terms: int
    dominant_census: dict
    routes: dict
    seconds: float
    region: TruncationRegion | None = None
    restricted_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return self.verdict in ("exact", "regional/certified")

    @property
    def residual_terms(self) -> int:
        return len(self.residual)

    def to_dict(self) -> dict:
        return {
            "equation": self.equation.to_dict(),
            "verdict": self.verdict,
            "residual_terms": self.residual_terms,
            "residual": self.residual.to_text(limit=20),
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "dominant_census": self.dominant_census,
            "routes": self.routes,
            "region": self.region.to_dict() if self.region else None,
            "restricted_ok": self.restricted_ok,
            "seconds": round(self.seconds, 3),
        }


def _census(poly: LaurentPoly) -> list:
    return [[m.to_text(), c] for m, c in enumerate_dominant(poly)]


def side_products(eq: EquationInstance, engine: CharacterEngine, region=None) -> tuple:
    """(lhs, rhs_first, rhs_second) products of slot characters."""
    chars = {x: engine.character(x, region) for x in eq.slots()}
    lhs = product(chars[x].poly for x in eq.lhs)
    rf = product(chars[x].poly for x in eq.rhs_first)
    rs = product(chars[x].poly for x in eq.rhs_second)
    return lhs, rf, rs, chars


def verify_equation(eq: EquationInstance, engine: CharacterEngine, region=None) -> VerificationReport:
    """Check lhs0*lhs1 = rhs0*rhs1 + rhs2(*rhs3) with exact integer arithmetic.

    With ``region="auto"`` (or an explicit region) all characters are
    truncated.  Truncation commutes with products, so the comparison is the
    truncated identity.  When the region leaves only right-negative
    monomials outside for the left highest weight, every dominant monomial
    of both sides lies in the region and equality there forces equality of
    the full identity; the verdict is then "regional/certified".
    """
    start = time.perf_counter()
    cd = engine.cd
    if eq.is_dual and region is not None:
        return _verify_dual_regional(eq, engine, region, start)
    top = product(LaurentPoly.monomial(highest_weight(x, cd)) for x in eq.lhs)
    m_plus = next(iter(top.monomials()))
    if region == "auto":
        region = auto_region(cd, m_plus)
    lhs, rf, rs, chars = side_products(eq, engine, region)
    rhs = rf + rs
    residual = lhs - rhs
    census = {"lhs": _census(lhs), "rhs": _census(rhs)}
    routes = {x.to_text(): engine.route(x) for x in eq.slots()}
    restricted_ok = None
    if region is None:
        verdict = "exact" if residual.is_zero() else "fail"
        restricted_ok = restrict_character(lhs) == restrict_character(rf) + restrict_character(rs)
    elif not residual.is_zero():
        verdict = "fail"
    else:
        certified = region.tail_is_right_negative(cd, m_plus) and all(
            _steps_inside(cd, m_plus, monomial_product(highest_weight(x, cd) for x in part), region)
            for part in (eq.rhs_first, eq.rhs_second)
        )
        verdict = "regional/certified" if certified else "regional"
    return VerificationReport(
        eq, verdict, residual, len(lhs), len(rhs), census, routes, time.perf_counter() - start, region, restricted_ok
    )


def _verify_dual_regional(eq: EquationInstance, engine: CharacterEngine, region, start: float) -> VerificationReport:
    """A truncated dual identity is the iota-image of the primal one.

    Every dual slot character is iota of its mirror, and iota is a ring
    homomorphism, so the dual residual is iota of the primal residual.  The
    census lists the anti-dominant images of the primal dominant monomials.
    """
    n = eq.n
    rep = verify_equation(dual_equation(eq), engine, region)

    def flip(rows):
        return [[iota_monomial(Monomial.from_text(m), n).to_text(), c] for m, c in rows]

    census = {side: flip(rows) for side, rows in rep.dominant_census.items()}
    routes = {x.to_text(): "iota" if not x.is_trivial() else "unit" for x in eq.slots()}
    return VerificationReport(
        eq, rep.verdict, iota(rep.residual, n), rep.lhs_terms, rep.rhs_terms, census, routes,
        time.perf_counter() - start, rep.region, rep.restricted_ok,
    )


def _steps_inside(cd: CartanData, top: Monomial, m: Monomial, region: TruncationRegion) -> bool:
    p = decompose_in_a_lattice(cd, top / m)
    return p is not None and p.is_nonnegative() and all(region.contains(i, t) for (i, t), _ in p.items())


# ---------------------------------------------------------------- dominant-monomial oracle


def _chain(cd: CartanData, M: Monomial, node: int, shift_of_j, r_max: int) -> list:
    """[M * prod_{0<=j<=r} A^{-1}_{node, shift_of_j(j)} for r = -1..r_max]."""
    out = []
    cur = M
    out.append(cur)
    for j in range(r_max + 1):
        cur = cur / a_monomial(cd, node, shift_of_j(j))
        out.append(cur)
    return out


def table1_prediction(eq: EquationInstance, cd: CartanData | None = None) -> dict:
    """Predicted dominant monomials of the three summand products.

    Keys are "lhs", "rhs_first", "rhs_second"; values are monomial lists in
    chain order (the r = -1 entry, M itself, first).
    """
    if eq.is_dual:
        raise Unsupported(f"no dominant-monomial table for the dual family {eq.family}")
    cd = cd or build_cartan(eq.n)
    n, s, k = eq.n, eq.s, eq.k
    hw = {
        part: monomial_product(highest_weight(x, cd) for x in getattr(eq, part))
        for part in ("lhs", "rhs_first", "rhs_second")
    }
    p = eq.param_dict()
    if eq.family == "eqn1":
        node, top = 1, k[0]
        tail = sum(k[1 : n - 1])
        shift = lambda j: -s - 2 * tail - n - 2 * j + 2  # noqa: E731
    elif eq.family == "eqn2":
        i = p["i"]
        node, top = i, k[i - 1]
        tail = sum(k[i : n - 1])
        shift = lambda j: -s - 2 * tail - n - 2 * j + i + 1  # noqa: E731
    elif eq.family == "eqn3":
        jj = p["j"]
        node, top = 1, k[0]
        tail = sum(k[jj - 1 : n - 1])
        shift = lambda j: -s - 2 * tail - n - 2 * j + 2  # noqa: E731
    elif eq.family == "eqn4":
        i, jj = p["i"], p["j"]
        node, top = i, k[i - 1]
        tail = sum(k[jj - 1 : n - 1])
        shift = lambda j: -s - 2 * tail - n - 2 * j + i + 1  # noqa: E731
    else:
        node, top = n, k[-1]
        shift = lambda j: s + 4 * top - 4 * j - 6  # noqa: E731
    return {
        "lhs": _chain(cd, hw["lhs"], node, shift, top - 1),
        "rhs_first": _chain(cd, hw["rhs_first"], node, shift, top - 2),
        "rhs_second": [hw["rhs_second"]],
    }


def verify_table1(eq: EquationInstance, engine: CharacterEngine, region="auto") -> dict:
    """Compare computed dominant monomials of each summand with the prediction.

    Every predicted monomial must occur with coefficient 1 and nothing else
    may be dominant.  Returns per-summand verdicts plus an overall "ok".
    """
    cd = engine.cd
    pred = table1_prediction(eq, cd)
    if region == "auto":
        m_plus = monomial_product(highest_weight(x, cd) for x in eq.lhs)
        region = auto_region(cd, m_plus)
    lhs, rf, rs, _ = side_products(eq, engine, region)
    got = {"lhs": lhs, "rhs_first": rf, "rhs_second": rs}
    out = {}
    for part, poly in got.items():
        found = sorted((m.to_text(), c) for m, c in enumerate_dominant(poly))
        expected = sorted((m.to_text(), 1) for m in pred[part])
        out[part] = {"found": found, "expected": expected, "ok": found == expected}
    out["ok"] = all(v["ok"] for v in out.values())
    return out


def simplicity_census(eq: EquationInstance, engine: CharacterEngine, region="auto") -> dict:
    """Per right summand: unique dominant monomial (hence simple) or undecided."""
    cd = engine.cd
    if region == "auto":
        m_plus = monomial_product(highest_weight(x, cd) for x in eq.lhs)
        region = auto_region(cd, m_plus)
    _, rf, rs, _ = side_products(eq, engine, region)
    out = {}
    for part, poly, labels in (("rhs_first", rf, eq.rhs_first), ("rhs_second", rs, eq.rhs_second)):
        dom = enumerate_dominant(poly)
        if all(x.is_trivial() for x in labels):
            verdict = "unit"
        elif len(dom) == 1:
            verdict = "simple"
        else:
            verdict = "not decided by specialness"
        out[part] = {"verdict": verdict, "dominant": [[m.to_text(), c] for m, c in dom]}
    return out


def anti_dominant_census(q: QCharacter) -> list:
    return [[m.to_text(), c] for m, c in enumerate_antidominant(q)]


# ---------------------------------------------------------------- printed suites

# (family, n, s, k) for the printed lists of equations; k is the second left factor.
C3_EXAMPLES = (
    ("eqn1", 3, 0, (1, 1, 0)),
    ("eqn1", 3, 0, (2, 1, 0)),
    ("eqn511", 3, -2, (0, 1, 1)),
    ("eqn511", 3, -6, (0, 1, 2)),
    ("eqn5211", 3, -2, (1, 0, 1)),
    ("eqn5211", 3, -6, (1, 0, 2)),
    ("eqn511", 3, -4, (1, 1, 1)),
    ("eqn511", 3, -8, (1, 1, 2)),
)
C4_EXAMPLES = (
    ("eqn5211", 4, -3, (1, 0, 0, 1)),
    ("eqn5211", 4, -5, (1, 1, 0, 1)),
    ("eqn5211", 4, -7, (2, 1, 0, 1)),
    ("eqn5211", 4, -9, (3, 1, 0, 1)),
)
C3_DUAL_EXAMPLES = tuple((DUAL_OF[f], n, s, k) for f, n, s, k in C3_EXAMPLES) + tuple(
    (DUAL_OF[f], n, s, k) for f, n, s, k in C4_EXAMPLES[:3]
)
# Mixed sample for the dominant-monomial oracle at n = 3, 4 and weight <= 3.
TABLE1_SAMPLE = (
    ("eqn1", 3, 0, (1, 1, 0)),
    ("eqn1", 3, 0, (2, 1, 0)),
    ("eqn1", 3, 1, (1, 2, 0)),
    ("eqn1", 4, 0, (1, 1, 1, 0)),
    ("eqn2", 4, 0, (0, 1, 1, 0)),
    ("eqn2", 4, 0, (0, 2, 1, 0)),
    ("eqn3", 4, 0, (1, 0, 1, 0)),
    ("eqn3", 4, 0, (1, 0, 2, 0)),
    ("eqn511", 3, 0, (0, 1, 1)),
    ("eqn511", 3, 0, (1, 1, 1)),
    ("eqn511", 3, 0, (0, 1, 2)),
    ("eqn512", 3, 0, (0, 2, 1)),
    ("eqn5211", 3, 0, (1, 0, 1)),
    ("eqn5221", 3, 0, (2, 0, 1)),
    ("eqn511", 4, 0, (0, 0, 1, 1)),
    ("eqn5211", 4, 0, (0, 1, 0, 1)),
)

SUITES = {
    "c3-examples": C3_EXAMPLES,
    "c4-examples": C4_EXAMPLES,
    "c3-dual-examples": C3_DUAL_EXAMPLES,
    "table1-sample": TABLE1_SAMPLE,
}


def suite_instances(name: str) -> list:
    if name not in SUITES:
        raise Unsupported(f"unknown suite {name!r}")
    return [make_equation(*spec) for spec in SUITES[name]]


# ---------------------------------------------------------------- decoding weights


def _node_degrees(m: Monomial, n: int) -> tuple:
    deg = [0] * n
    for (i, _), e in m.items():
        deg[i - 1] += e
    return tuple(deg)


def _solve_shift(variant: str, k: tuple, m: Monomial) -> ModuleLabel | None:
    base = ModuleLabel(variant, 0, k)
    h0 = highest_weight(base)
    delta = min(m.shifts()) - min(h0.shifts())
    s = delta if variant in ("Ttilde", "Stilde") else -delta
    label = ModuleLabel(variant, s, k)
    return label if highest_weight(label) == m else None


def _stilde_for_weight(m: Monomial, n: int, deg: tuple) -> list:
    from itertools import product as cartesian

    out = []
    if deg[-1] != 0 or deg[-2] < 1:
        return out
    for head in cartesian(*(range(x + 1) for x in deg[: n - 2])):
        k = tuple(head) + (deg[-2], 0)
        second = _second_factor(k) or (0,) * n
        if tuple(a + b for a, b in zip(k, second)) != deg:
            continue
        hit = _solve_shift("Stilde", k, m)
        if hit is not None:
            out.append(hit)
    return out


def labels_for_weight(m: Monomial, n: int) -> list:
    """Every T, T~, S or S~ label of rank n whose highest weight is m."""
    if m.is_unit():
        return [ModuleLabel("T", 0, (0,) * n)]
    if any(e < 0 for _, e in m.items()) or any(i > n for i in m.nodes()):
        return []
    deg = _node_degrees(m, n)
    out = []
    for variant in ("T", "Ttilde"):
        hit = _solve_shift(variant, deg, m)
        if hit is not None:
            out.append(hit)
    out += _stilde_for_weight(m, n, deg)
    flipped = m.map_variables(lambda i, s: (i, -s, 1))
    out += [x.mirror() for x in _stilde_for_weight(flipped, n, deg)]
    return out
