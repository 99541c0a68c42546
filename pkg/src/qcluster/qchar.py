"""q-characters: the Frenkel-Mukhin algorithm with optional truncation,
the truncated-character certificate, specialness tests, the involution
iota and restriction to ordinary characters."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .cartan import CartanData
from .errors import BudgetExceeded, IncompleteCharacter, NonSpecialDetected, NotDominant
from .laurent import LaurentPoly
from .monomial import (
    Monomial,
    _a_items,
    decompose_in_a_lattice,
    is_antidominant,
    is_dominant,
    is_j_dominant,
)
from .sl2 import beta_monomial, lowering_patterns

CACHE_ENV = "QCLUSTER_CACHE_DIR"


@dataclass(frozen=True)
class TruncationRegion:
    """The set U of pairs (i, s) allowed as A^{-1}_{i,s} steps.

    Either a global bound ``s <= bound`` or per-node bounds (nodes missing
    from ``node_bounds`` fall back to ``bound``; with no bound at all they are
    excluded).
    """

    bound: int | None = None
    node_bounds: tuple = ()

    def contains(self, i: int, s: int) -> bool:
        for j, b in self.node_bounds:
            if j == i:
                return s <= b
        return self.bound is not None and s <= self.bound

    def node_bound(self, i: int):
        for j, b in self.node_bounds:
            if j == i:
                return b
        return self.bound

    def tail_is_right_negative(self, cd: CartanData, m_plus: Monomial) -> bool:
        """True when every monomial of m_plus Q^- outside m_plus Q^-_U is right-negative.

        Such a monomial contains some A^{-1}_{i,s} with s above the node bound,
        whose top variable Y_{i,s+d_i}^{-1} then sits strictly above every
        variable of m_plus and cannot be cancelled.
        """
        if m_plus.is_unit():
            return True
        top = max(m_plus.shifts())
        for i in cd.nodes:
            b = self.node_bound(i)
            if b is None:
                return False
            if b + cd.di(i) < top:
                return False
        return True

    def to_dict(self) -> dict:
        return {"bound": self.bound, "node_bounds": {str(i): b for i, b in self.node_bounds}}

    @classmethod
    def from_dict(cls, data) -> "TruncationRegion | None":
        if data is None:
            return None
        nb = tuple(sorted((int(i), int(b)) for i, b in data.get("node_bounds", {}).items()))
        return cls(data.get("bound"), nb)

    @classmethod
    def parse(cls, text: str) -> "TruncationRegion":
        """Parse ``s<=B`` (global) or ``i:B,j:B'`` (per node)."""
        text = text.replace(" ", "")
        if text.startswith("s<="):
            return cls(int(text[3:]))
        pairs = []
        for part in text.split(","):
            i, b = part.split(":")
            pairs.append((int(i), int(b)))
        return cls(None, tuple(sorted(pairs)))


@dataclass(frozen=True)
class QCharacter:
    """q-character of L(highest), possibly truncated to a region."""

    poly: LaurentPoly
    highest: Monomial
    region: TruncationRegion | None = None
    complete: bool = True
    rank: int = 0

    def __len__(self):
        return len(self.poly)

    def dominant_monomials(self) -> list:
        return enumerate_dominant(self.poly)

    def to_dict(self) -> dict:
        d = {"highest": self.highest.to_dict()}
        d.update(self.poly.to_dict())
        d["complete"] = self.complete
        d["region"] = self.region.to_dict() if self.region else None
        d["rank"] = self.rank
        return d

    @classmethod
    def from_dict(cls, data) -> "QCharacter":
        return cls(
            LaurentPoly.from_dict(data),
            Monomial.from_dict(data["highest"]),
            TruncationRegion.from_dict(data.get("region")),
            bool(data["complete"]),
            int(data.get("rank", 0)),
        )


def _apply(key: tuple, delta: tuple) -> tuple:
    d = dict(key)
    for k, e in delta:
        v = d.get(k, 0) + e
        if v:
            d[k] = v
        else:
            del d[k]
    return tuple(sorted(d.items()))


class _Lowering:
    """Caches the monomials prod_t A^{-1}_{i,t} used by the FM expansion."""

    def __init__(self, cd: CartanData):
        self.cd = cd
        self._cache: dict = {}

    def delta(self, i: int, steps: tuple) -> tuple:
        key = (i, steps)
        hit = self._cache.get(key)
        if hit is None:
            acc: dict = {}
            for t in steps:
                for k, e in _a_items(self.cd, i, t):
                    acc[k] = acc.get(k, 0) - e
            hit = tuple(sorted((k, e) for k, e in acc.items() if e))
            self._cache[key] = hit
        return hit


def frenkel_mukhin(
    cd: CartanData,
    m_plus: Monomial,
    region: TruncationRegion | None = None,
    budget: int | None = None,
) -> QCharacter:
    """Run the FM algorithm from the dominant monomial m_plus.

    Monomials are processed level by level (number of A^{-1} factors below
    m_plus).  For each monomial the coefficient is read off a node where it
    is not dominant; for every node i where it is i-dominant, the missing
    multiplicity is spread over the i-th sl_2 character.  Steps outside
    ``region`` are dropped, which yields the truncated character because all
    ancestors of a monomial in m_plus Q^-_U lie in the same set.
    """
    if not is_dominant(m_plus):
        raise NotDominant(f"highest weight must be dominant: {m_plus}")
    nodes = list(cd.nodes)
    n = cd.rank
    lower = _Lowering(cd)
    top = m_plus.items()
    colored: dict = {top: [0] * n}
    coef: dict = {}
    buckets: dict = {0: {top}}
    level = 0
    processed = 0
    complete = True
    while buckets:
        if level not in buckets:
            level = min(buckets)
        current = sorted(buckets.pop(level))
        for key in current:
            processed += 1
            if budget is not None and processed > budget:
                raise BudgetExceeded(f"more than {budget} monomials expanded")
            col = colored.pop(key)
            by_node: dict = {}
            for (i, s), e in key:
                by_node.setdefault(i, []).append((s, e))
            dominant_at = [i for i in nodes if all(e > 0 for _, e in by_node.get(i, ()))]
            if key is top:
                mult = 1
            else:
                other = [col[i - 1] for i in nodes if i not in dominant_at]
                if not other:
                    raise NonSpecialDetected(
                        f"dominant monomial {Monomial._make(key)} below the highest weight",
                        Monomial._make(key),
                    )
                mult = other[0]
                if any(v != mult for v in other) or mult <= 0:
                    raise NonSpecialDetected(
                        f"inconsistent sl2 multiplicities at {Monomial._make(key)}",
                        Monomial._make(key),
                    )
            coef[key] = mult
            for i in dominant_at:
                diff = mult - col[i - 1]
                if diff < 0:
                    raise NonSpecialDetected(
                        f"node {i} multiplicity exceeds coefficient at {Monomial._make(key)}",
                        Monomial._make(key),
                    )
                if not diff:
                    continue
                exps = tuple(by_node.get(i, ()))
                for steps, c in lowering_patterns(exps, cd.di(i)):
                    if not steps:
                        continue
                    if region is not None and not all(region.contains(i, t) for t in steps):
                        complete = False
                        continue
                    child = _apply(key, lower.delta(i, steps))
                    slot = colored.get(child)
                    if slot is None:
                        slot = colored[child] = [0] * n
                        buckets.setdefault(level + len(steps), set()).add(child)
                    slot[i - 1] += diff * c
        level += 1
    poly = LaurentPoly._wrap({Monomial._make(k): c for k, c in coef.items()})
    return QCharacter(poly, m_plus, region, complete, n)


# ---------------------------------------------------------------- certificate


@dataclass
class CertificationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _slice_point(cd: CartanData, m: Monomial, m2: Monomial):
    return decompose_in_a_lattice(cd, m2 / m)


def certify_truncation(cd: CartanData, m_plus: Monomial, region: TruncationRegion, candidate) -> CertificationReport:
    """Check the four conditions guaranteeing trunc_U chi_q(m_plus) = sum(candidate)."""
    members = list(dict.fromkeys(candidate))
    mset = set(members)
    violations = []
    if m_plus not in mset:
        violations.append(("pre", f"{m_plus} is not in the candidate set"))
    # (i) every member lies in m_plus Q^-_U
    for m in members:
        p = decompose_in_a_lattice(cd, m_plus / m)
        if p is None or not p.is_nonnegative() or not all(region.contains(i, s) for (i, s), _ in p.items()):
            violations.append(("i", f"{m} is not in m_+ Q^-_U"))
    # (ii) unique dominant member
    for m in members:
        if m != m_plus and is_dominant(m):
            violations.append(("ii", f"second dominant monomial {m}"))
    # (iii) m A^{-1}_{i,a} A_{j,b} in M forces m A^{-1}_{i,a} in M
    for m in members:
        for m2 in members:
            if m2 == m:
                continue
            p = _slice_point(cd, m, m2)
            if p is None:
                continue
            items = p.items()
            if len(items) != 2:
                continue
            neg = [k for k, v in items if v == -1]
            pos = [k for k, v in items if v == 1]
            if len(neg) != 1 or len(pos) != 1:
                continue
            i, a = neg[0]
            if not region.contains(i, a):
                continue
            lowered = m * Monomial(_a_items(cd, i, a)).inverse()
            if lowered not in mset:
                violations.append(("iii", f"{m} * A^-1_{i},{a} missing while {m2} present"))
    # (iv) every i-slice is the truncated sl2 character of one i-dominant member
    for i in cd.nodes:
        seen = set()
        for m in members:
            if m in seen:
                continue
            slice_ = [m]
            for m2 in members:
                if m2 == m:
                    continue
                p = _slice_point(cd, m, m2)
                if p is not None and all(j == i for (j, _), _ in p.items()):
                    slice_.append(m2)
            seen.update(slice_)
            target = {}
            for m2 in slice_:
                b = beta_monomial(m2, i)
                target[b] = target.get(b, 0) + 1
            hits = 0
            for top in slice_:
                if not is_j_dominant(top, i):
                    continue
                bt = beta_monomial(top, i)
                exps = tuple((s, e) for (_, s), e in bt.items())
                got = {}
                for steps, c in lowering_patterns(exps, cd.di(i)):
                    if all(region.contains(i, t) for t in steps):
                        mono = bt
                        for t in steps:
                            mono = mono * Monomial((((1, t - cd.di(i)), -1), ((1, t + cd.di(i)), -1)))
                        got[mono] = got.get(mono, 0) + c
                if got == target:
                    hits += 1
            if hits != 1:
                violations.append(("iv", f"node {i} slice through {m} matched {hits} i-dominant members"))
    return CertificationReport(not violations, violations)


# ---------------------------------------------------------------- predicates


def enumerate_dominant(p) -> list:
    """Dominant monomials of p with coefficients, in canonical order."""
    poly = p.poly if isinstance(p, QCharacter) else p
    return sorted(((m, c) for m, c in poly.items() if is_dominant(m)), key=lambda t: t[0].items())


def enumerate_antidominant(p) -> list:
    poly = p.poly if isinstance(p, QCharacter) else p
    return sorted(((m, c) for m, c in poly.items() if is_antidominant(m)), key=lambda t: t[0].items())


def _definitive(q: QCharacter, count: int, cd: CartanData | None, lowest: bool) -> bool:
    if q.complete:
        return count == 1
    if count != 1:
        return False
    if not lowest and q.region is not None and cd is not None and q.region.tail_is_right_negative(cd, q.highest):
        return True
    raise IncompleteCharacter("truncated character: a single dominant monomial in the region is not conclusive")


def is_special(q: QCharacter, cd: CartanData | None = None) -> bool:
    """Exactly one dominant monomial.

    For truncated characters the answer is definitive when ``cd`` is given
    and the region leaves only right-negative monomials outside.
    """
    return _definitive(q, len(enumerate_dominant(q)), cd, lowest=False)


def is_anti_special(q: QCharacter, cd: CartanData | None = None) -> bool:
    return _definitive(q, len(enumerate_antidominant(q)), cd, lowest=True)


# ---------------------------------------------------------------- iota, restriction


def iota_monomial(m: Monomial, n: int) -> Monomial:
    return Monomial(((i, 2 * n + 2 - s), -e) for (i, s), e in m.items())


def iota(p, n: int):
    """Y_{i,s} -> Y_{i,2n+2-s}^{-1}; accepts monomials, polynomials and characters."""
    if isinstance(p, Monomial):
        return iota_monomial(p, n)
    if isinstance(p, QCharacter):
        if not p.complete:
            raise IncompleteCharacter("iota of a truncated character is not a truncated character")
        poly = iota(p.poly, n)
        lowest = [m for m, _ in enumerate_antidominant(p.poly)]
        highest = iota_monomial(lowest[0], n) if len(lowest) == 1 else iota_monomial(p.highest, n)
        return QCharacter(poly, highest, None, True, p.rank)
    return p.map_monomials(lambda m: iota_monomial(m, n))


def restrict_character(p) -> LaurentPoly:
    """Forget spectral shifts: Y_{i,s} -> y_i, encoded as the variable (i, 0)."""
    poly = p.poly if isinstance(p, QCharacter) else p

    def forget(m: Monomial) -> Monomial:
        return Monomial(((i, 0), e) for (i, _), e in m.items())

    return poly.map_monomials(forget)


# ---------------------------------------------------------------- cache


def cache_key(cd: CartanData, m_plus: Monomial, region: TruncationRegion | None) -> str:
    payload = json.dumps(
        {"cartan": cd.to_dict(), "m": m_plus.to_text(), "region": region.to_dict() if region else None},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


class CharacterCache:
    """Content-addressed JSON store of computed characters."""

    def __init__(self, directory=None):
        directory = directory or os.environ.get(CACHE_ENV)
        self.directory = Path(directory) if directory else None

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, cd, m_plus, region):
        if self.directory is None:
            return None
        path = self._path(cache_key(cd, m_plus, region))
        if not path.exists():
            return None
        with open(path) as fh:
            return QCharacter.from_dict(json.load(fh))

    def put(self, cd, m_plus, region, q: QCharacter) -> None:
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(cache_key(cd, m_plus, region))
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        with open(tmp, "w") as fh:
            json.dump(q.to_dict(), fh, separators=(",", ":"))
        os.replace(tmp, path)

    def entries(self) -> list:
        if self.directory is None or not self.directory.exists():
            return []
        return sorted(self.directory.glob("*.json"))

    def clear(self) -> int:
        files = self.entries()
        for f in files:
            f.unlink()
        return len(files)


def compute_character(cd, m_plus, region=None, budget=None, cache: CharacterCache | None = None) -> QCharacter:
    """frenkel_mukhin with an optional cache in front."""
    if cache is not None:
        hit = cache.get(cd, m_plus, region)
        if hit is not None:
            return hit
    q = frenkel_mukhin(cd, m_plus, region, budget)
    if cache is not None:
        cache.put(cd, m_plus, region, q)
    return q
