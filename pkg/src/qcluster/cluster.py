"""Cluster algebras of type C_n on a finite window of the infinite quiver.

Vertices are (node, row) pairs.  The primal algebra lives on rows <= 0 and
its initial variables are Kirillov-Reshetikhin modules hanging down from the
top of each column; the dual algebra is its mirror image on rows >= 0.

Variables are tracked by highest weight.  In an exchange relation one of the
two products has highest weight hw(old) * hw(new) and the other lies below
it, so the new highest weight is max(hw_in, hw_out) / hw(old).  Optional
payloads carry the actual characters and are divided exactly.

A window keeps every vertex with |row| <= depth.  Vertices with an arrow
leaving the window in the infinite quiver are boundary vertices and are never
mutated.  When a schedule reaches one it is skipped, and everything that the
skipped mutation would have changed is marked tainted; a record is trusted
iff neither its pivot nor any neighbour is tainted.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .affinization import (
    FAMILIES,
    PRIMAL_FAMILIES,
    DUAL_OF,
    CharacterEngine,
    EquationInstance,
    ModuleLabel,
    highest_weight,
    labels_for_weight,
    make_equation,
)
from .cartan import CartanData
from .errors import (
    AmbiguousMatch,
    BoundaryVertex,
    ConstraintViolated,
    IncomparableExchange,
    InvalidLabel,
    QClusterError,
    WindowTooSmall,
)
from .laurent import LaurentPoly, exact_divide
from .monomial import Monomial, leq, monomial_product

ALGEBRAS = ("A", "Atilde")
DEFAULT_PAYLOAD_BUDGET = 200_000


# ---------------------------------------------------------------- quiver


@dataclass(frozen=True)
class Quiver:
    """A finite quiver stored as a skew-symmetric exchange matrix.

    ``arrows`` maps (u, v) with u -> v to the (positive) number of arrows.
    """

    vertices: frozenset
    arrows: dict = field(default_factory=dict, hash=False, compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, frozenset(self.arrows.items())))

    def out_neighbors(self, v) -> dict:
        return {b: m for (a, b), m in self.arrows.items() if a == v}

    def in_neighbors(self, v) -> dict:
        return {a: m for (a, b), m in self.arrows.items() if b == v}

    def neighbors(self, v) -> set:
        return set(self.out_neighbors(v)) | set(self.in_neighbors(v))

    def arrow_list(self) -> list:
        return sorted((a, b, m) for (a, b), m in self.arrows.items())

    def has_loops(self) -> bool:
        return any(a == b for a, b in self.arrows)

    def has_two_cycles(self) -> bool:
        return any((b, a) in self.arrows for a, b in self.arrows)

    def mutate(self, v) -> "Quiver":
        if v not in self.vertices:
            raise BoundaryVertex(f"vertex {v} is not in the quiver")
        ins = self.in_neighbors(v)
        outs = self.out_neighbors(v)
        skew = {}
        for (a, b), m in self.arrows.items():
            if v in (a, b):
                continue
            skew[(a, b)] = skew.get((a, b), 0) + m
            skew[(b, a)] = skew.get((b, a), 0) - m
        for a, p in ins.items():
            for b, q in outs.items():
                skew[(a, b)] = skew.get((a, b), 0) + p * q
                skew[(b, a)] = skew.get((b, a), 0) - p * q
        arrows = {pair: m for pair, m in skew.items() if m > 0}
        for a, m in ins.items():
            arrows[(v, a)] = m
        for b, m in outs.items():
            arrows[(b, v)] = m
        return Quiver(self.vertices, arrows)

    def to_dot(self, names: dict | None = None) -> str:
        def node(v):
            return f'"{v[0]},{v[1]}"'

        lines = ["digraph Q {"]
        for v in sorted(self.vertices):
            extra = f' [label="{v[0]},{v[1]}\\n{names[v]}"]' if names and v in names else ""
            lines.append(f"  {node(v)}{extra};")
        for a, b, m in self.arrow_list():
            label = f' [label="{m}"]' if m > 1 else ""
            lines.append(f"  {node(a)} -> {node(b)}{label};")
        lines.append("}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in sorted(self.vertices)],
            "arrows": [[list(a), list(b), m] for a, b, m in self.arrow_list()],
        }


# ---------------------------------------------------------------- the infinite quivers


def _row_ok(algebra: str, n: int, i: int, r: int) -> bool:
    """Membership of (i, r) in the vertex set of the infinite quiver."""
    if algebra == "Atilde":
        r = -r
    if r > 0:
        return False
    if i < n:
        return (r % 2 == 0) if i % 2 else (r % 2 == 1)
    return (r % 2 == 0) if n % 2 else (r % 2 == 1)


def _arrow_target(algebra: str, cd: CartanData, i: int, r: int, j: int) -> int:
    if algebra == "A":
        return r + cd.b(i, j) - cd.di(i) + cd.di(j)
    return r - cd.b(i, j) + cd.di(i) - cd.di(j)


def _infinite_neighbors(algebra: str, cd: CartanData, v) -> set:
    """Neighbours of v in the infinite quiver (both directions)."""
    i, r = v
    out = set()
    for j in cd.nodes:
        if cd.b(i, j) == 0:
            continue
        s = _arrow_target(algebra, cd, i, r, j)
        if _row_ok(algebra, cd.rank, j, s):
            out.add((j, s))
        for s2 in range(r - 8, r + 9):
            if _row_ok(algebra, cd.rank, j, s2) and _arrow_target(algebra, cd, j, s2, i) == r:
                out.add((j, s2))
    return out


def columns(algebra: str, n: int, depth: int) -> dict:
    """Column index -> vertices inside the window, first vertex first.

    Columns 1..n-1 are the nodes; columns n and n+1 split node n by row mod 4.
    The first vertex of each column is the one nearest row 0.
    """
    cols = {}
    for i in range(1, n):
        top = 0 if i % 2 else -1
        cols[i] = [(i, r) for r in range(top, -depth - 1, -2)]
    tops = (0, -2) if n % 2 else (-1, -3)
    cols[n] = [(n, r) for r in range(tops[0], -depth - 1, -4)]
    cols[n + 1] = [(n, r) for r in range(tops[1], -depth - 1, -4)]
    if algebra == "Atilde":
        cols = {c: [(i, -r) for i, r in vs] for c, vs in cols.items()}
    return cols


def column_of(algebra: str, n: int, v) -> int:
    i, r = v
    if i < n:
        return i
    r = abs(r)
    first = 0 if n % 2 else 1
    return n if (r - first) % 4 == 0 else n + 1


def initial_label(algebra: str, n: int, v) -> ModuleLabel:
    """The Kirillov-Reshetikhin module sitting at v in the initial seed.

    Its strings run from the first row of v's column to v's row.
    """
    i, r = v
    top = {c: vs[0][1] for c, vs in columns("A", n, 4).items()}
    rr = -r if algebra == "Atilde" else r
    if i < n:
        a = top[i]
        k = (a - rr) // 2 + 1
        s = -n + i - (i % 2) + 1
        variant = "T"
    else:
        a = top[column_of(algebra, n, v)]
        k = (a - rr) // 4 + 1
        s = a - 4 * (k - 1)
        variant = "Ttilde"
    vec = [0] * n
    vec[i - 1] = k
    label = ModuleLabel(variant, s, tuple(vec))
    return label.mirror() if algebra == "Atilde" else label


# ---------------------------------------------------------------- variables and seeds


@dataclass(frozen=True)
class ClusterVar:
    """A cluster variable: its highest weight, its symbol and an optional character."""

    hw: Monomial
    symbol: str = field(default="", compare=False, hash=False)
    payload: LaurentPoly | None = field(default=None, compare=False, hash=False)

    def labels(self, n: int) -> list:
        return labels_for_weight(self.hw, n)

    def label(self, n: int) -> ModuleLabel | None:
        found = self.labels(n)
        return found[0] if found else None

    def to_dict(self, n: int) -> dict:
        return {
            "symbol": self.symbol,
            "hw": self.hw.to_text(),
            "labels": [x.to_text() for x in self.labels(n)],
        }


@dataclass(frozen=True)
class Seed:
    algebra: str
    cd: CartanData
    depth: int
    quiver: Quiver
    assignment: dict = field(hash=False, compare=False)
    boundary: frozenset = frozenset()
    tainted: frozenset = frozenset()

    @property
    def n(self) -> int:
        return self.cd.rank

    def window(self) -> dict:
        return columns(self.algebra, self.n, self.depth)

    def variable(self, v) -> ClusterVar:
        return self.assignment[v]

    def same_state(self, other: "Seed") -> bool:
        return self.quiver == other.quiver and self.assignment == other.assignment

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "n": self.n,
            "depth": self.depth,
            "quiver": self.quiver.to_dict(),
            "variables": [
                {"vertex": list(v), **self.assignment[v].to_dict(self.n)}
                for v in sorted(self.assignment)
            ],
            "boundary": [list(v) for v in sorted(self.boundary)],
            "columns": {str(c): [list(v) for v in vs] for c, vs in self.window().items()},
        }

    def to_dot(self) -> str:
        names = {v: x.symbol for v, x in self.assignment.items()}
        return self.quiver.to_dot(names)


def build_initial_seed(algebra: str, cd: CartanData, depth: int) -> Seed:
    """Initial seed of the primal (``A``) or dual (``Atilde``) algebra on |row| <= depth."""
    if algebra not in ALGEBRAS:
        raise InvalidLabel(f"unknown algebra {algebra!r}")
    if depth < 1:
        raise InvalidLabel("window depth must be >= 1")
    n = cd.rank
    verts = set()
    for vs in columns(algebra, n, depth).values():
        verts.update(vs)
    arrows = {}
    for i, r in verts:
        for j in cd.nodes:
            if cd.b(i, j) == 0:
                continue
            w = (j, _arrow_target(algebra, cd, i, r, j))
            if w in verts:
                arrows[((i, r), w)] = arrows.get(((i, r), w), 0) + 1
    boundary = frozenset(v for v in verts if not _infinite_neighbors(algebra, cd, v) <= verts)
    assignment = {}
    for v in verts:
        label = initial_label(algebra, n, v)
        assignment[v] = ClusterVar(highest_weight(label), label.to_text())
    return Seed(algebra, cd, depth, Quiver(frozenset(verts), arrows), assignment, boundary)


# ---------------------------------------------------------------- mutation


@dataclass(frozen=True)
class ExchangeRecord:
    """old * new = prod(incoming) + prod(outgoing) at a vertex."""

    step: int
    vertex: tuple
    old: ClusterVar
    new: ClusterVar
    incoming: tuple
    outgoing: tuple
    hw_in: Monomial
    hw_out: Monomial
    trusted: bool
    provenance: str = ""
    payload_status: str = "none"

    def key(self) -> tuple:
        def side(xs):
            return tuple(sorted((v, x.hw.to_text(), m) for v, x, m in xs))

        return (self.vertex, self.old.hw, self.new.hw, side(self.incoming), side(self.outgoing))

    def to_dict(self, n: int) -> dict:
        def side(xs):
            return [{"vertex": list(v), "hw": x.hw.to_text(), "mult": m} for v, x, m in xs]

        return {
            "step": self.step,
            "vertex": list(self.vertex),
            "provenance": self.provenance,
            "trusted": self.trusted,
            "payload": self.payload_status,
            "old": self.old.to_dict(n),
            "new": self.new.to_dict(n),
            "incoming": side(self.incoming),
            "outgoing": side(self.outgoing),
        }


def _side_hw(xs) -> Monomial:
    return monomial_product(x.hw ** m for _, x, m in xs)


def _payload(seed: Seed, x: ClusterVar, engine: CharacterEngine) -> LaurentPoly:
    if x.payload is not None:
        return x.payload
    label = x.label(seed.n)
    return engine.character(label).poly


def _side_payload(seed, xs, engine, budget) -> LaurentPoly | None:
    """Product of the payloads on one side, None if it would exceed the budget."""
    polys = []
    for _, x, m in xs:
        polys += [_payload(seed, x, engine)] * m
    size = 1
    for p in polys:
        size *= len(p)
    if budget is not None and size > budget:
        return None
    acc = LaurentPoly.one()
    for p in sorted(polys, key=len):
        acc = acc * p
    return acc


def _hinted_quotient(seed, hw: Monomial, num: LaurentPoly, den: LaurentPoly, engine):
    """num / den, checked by multiplying back a candidate quotient.

    The candidate is the character of the module whose highest weight is hw.
    The Laurent ring is a domain, so den * q == num proves the division exact
    with quotient q; otherwise fall back to long division.
    """
    found = labels_for_weight(hw, seed.n)
    if found:
        q = engine.character(found[0]).poly
        if den * q == num:
            return q
    return exact_divide(num, den)


def mutate(
    seed: Seed,
    v,
    engine: CharacterEngine | None = None,
    step: int = 0,
    provenance: str = "",
    payload_budget: int | None = DEFAULT_PAYLOAD_BUDGET,
) -> tuple:
    """Mutate at v.  With an engine, payloads are carried and divided exactly.

    An exchange whose two products would have more than ``payload_budget``
    term pairs is not multiplied out; its record says ``skipped``.
    """
    if v not in seed.quiver.vertices or v in seed.boundary:
        raise BoundaryVertex(f"vertex {v} is on the window boundary or outside it")
    q = seed.quiver
    a = seed.assignment
    incoming = tuple(sorted((u, a[u], m) for u, m in q.in_neighbors(v).items()))
    outgoing = tuple(sorted((u, a[u], m) for u, m in q.out_neighbors(v).items()))
    old = a[v]
    hw_in, hw_out = _side_hw(incoming), _side_hw(outgoing)
    nbrs = q.neighbors(v)
    trusted = v not in seed.tainted and not (nbrs & seed.tainted)
    if leq(seed.cd, hw_out, hw_in):
        top = hw_in
    elif leq(seed.cd, hw_in, hw_out):
        top = hw_out
    elif trusted:
        raise IncomparableExchange(f"exchange at {v}: {hw_in} and {hw_out} are incomparable")
    else:
        top = max(hw_in, hw_out)
    new_hw = top / old.hw
    payload, status = None, "none"
    if engine is not None and not trusted:
        status = "untrusted"
    elif engine is not None:
        p_in = _side_payload(seed, incoming, engine, payload_budget)
        p_out = _side_payload(seed, outgoing, engine, payload_budget)
        if p_in is None or p_out is None:
            status = "skipped"
        else:
            den = _payload(seed, old, engine)
            payload = _hinted_quotient(seed, new_hw, p_in + p_out, den, engine)
            status = "exact"
    new = ClusterVar(new_hw, f"{old.symbol}'", payload)
    assignment = dict(a)
    assignment[v] = new
    tainted = seed.tainted if trusted else seed.tainted | {v} | nbrs
    out = replace(seed, quiver=q.mutate(v), assignment=assignment, tainted=frozenset(tainted))
    rec = ExchangeRecord(
        step, v, old, new, incoming, outgoing, hw_in, hw_out, trusted, provenance, status
    )
    return out, rec


def skip(seed: Seed, v) -> Seed:
    """Account for a mutation that the window cannot perform."""
    spoiled = {v} | seed.quiver.neighbors(v) | seed.boundary
    return replace(seed, tainted=frozenset(seed.tainted | spoiled))


# ---------------------------------------------------------------- schedules


@dataclass(frozen=True)
class Step:
    vertex: tuple
    column: int
    span: str
    skipped: bool = False


@dataclass(frozen=True)
class MutationSchedule:
    """Vertex-level expansion of a column sequence.

    ``steps`` includes boundary vertices flagged ``skipped``; ``vertices``
    lists only the ones actually mutated.
    """

    algebra: str
    n: int
    depth: int
    steps: tuple
    spans: tuple = ()
    case: int | None = None
    k: tuple = ()
    target: ModuleLabel | None = None

    @property
    def vertices(self) -> list:
        return [s.vertex for s in self.steps if not s.skipped]

    @property
    def column_sequence(self) -> list:
        return [c for _, c in self.spans]

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "n": self.n,
            "depth": self.depth,
            "case": self.case,
            "k": list(self.k),
            "target": self.target.to_text() if self.target else None,
            "columns": [[span, c] for span, c in self.spans],
            "steps": [
                {"vertex": list(s.vertex), "column": s.column, "span": s.span, "skipped": s.skipped}
                for s in self.steps
            ],
        }


def _case1_columns(n: int, k: tuple) -> list:
    """(span, column) pairs of the Case 1 sequence."""
    l = max(p + 1 for p in range(n - 1) if k[p])
    out = []
    blocks = (l - 1) // 2 if l % 2 else l // 2
    for b in range(1, blocks + 1):
        for c in range(2 * b - 1, 0, -1):
            out.append((f"M{b}", c))
    for t in range(l, 1, -1):
        for rep in range(k[t - 1]):
            for c in range(t - 1, 0, -1):
                out.append((f"R{t}.{rep + 1}", c))
    return out


def _prefix_blocks(n: int, r: int) -> int:
    if r == n:
        return 0
    if r == n - 1:
        return 1 if n % 2 else 0
    if n % 2:
        return (n - r) // 2 if r % 2 else (n - r + 1) // 2
    return (n - r - 1) // 2 if r % 2 else (n - r) // 2


def _case2_columns(n: int, k: tuple) -> list:
    nz = [p + 1 for p in range(n - 1) if k[p]]
    r = nz[0] if nz else n
    blocks = _prefix_blocks(n, r)
    out = []
    for b in range(1, blocks + 1):
        last = n if b % 2 else n + 1
        for c in list(range(n - 2 * b + 2, n)) + [last]:
            out.append((f"N{b}", c))
    if r == n:
        return out
    acc = blocks
    for t in range(r, n):
        primed = acc % 2 == 1
        for rep in range(k[t - 1]):
            last = n + 1 if primed else n
            name = "S'" if primed else "S"
            for c in list(range(t + 1, n)) + [last]:
                out.append((f"{name}{t}.{rep + 1}", c))
            primed = not primed
        acc += k[t - 1]
    return out


def case_target(case: int, n: int, k: tuple) -> ModuleLabel:
    """The variable a Case 1 / Case 2 schedule is meant to produce."""
    if case == 1:
        l = max(p + 1 for p in range(n - 1) if k[p])
        return ModuleLabel("T", -n + l - (l % 2) + 1, k)
    nz = [p + 1 for p in range(n - 1) if k[p]]
    r = nz[0] if nz else n
    s = -4 * k[-1] - 2 * sum(k[r - 1 : n - 1]) - n + r + (r % 2) + 1
    return ModuleLabel("Ttilde", s, k)


def _check_case(case: int, n: int, k: tuple):
    if len(k) != n or any(x < 0 for x in k):
        raise ConstraintViolated(f"k must be {n} nonnegative integers")
    if case == 1:
        if k[-1] != 0 or not any(k[:-1]):
            raise ConstraintViolated("Case 1 needs k_n = 0 and some k_i > 0 with i < n")
    elif case == 2:
        if k[-1] < 1:
            raise ConstraintViolated("Case 2 needs k_n >= 1")
    else:
        raise ConstraintViolated(f"unknown case {case!r}")


def expand_columns(algebra: str, cd: CartanData, depth: int, spans: list) -> tuple:
    seed = build_initial_seed(algebra, cd, depth)
    cols = seed.window()
    steps = []
    for span, c in spans:
        for v in cols[c]:
            steps.append(Step(v, c, span, v in seed.boundary))
    return tuple(steps)


def compile_schedule(
    case: int,
    cd: CartanData,
    k,
    depth: int,
    algebra: str = "A",
    check: bool = True,
    max_depth: int = 64,
) -> MutationSchedule:
    """Expand the Case 1 / Case 2 column sequence for k over a window.

    With ``check`` the schedule is simulated on labels, and WindowTooSmall
    reports the least depth at which the target variable comes out of a
    trusted exchange.
    """
    n = cd.rank
    k = tuple(int(x) for x in k)
    _check_case(case, n, k)
    spans = _case1_columns(n, k) if case == 1 else _case2_columns(n, k)
    target = case_target(case, n, k)
    if algebra == "Atilde":
        target = target.mirror()

    def build(d):
        return MutationSchedule(algebra, n, d, expand_columns(algebra, cd, d, spans),
                                tuple(spans), case, k, target)

    sched = build(depth)
    if check and not _reaches_target(cd, sched):
        for d in range(depth + 1, max_depth + 1):
            if _reaches_target(cd, build(d)):
                raise WindowTooSmall(d)
        raise WindowTooSmall(None)
    return sched


def _reaches_target(cd: CartanData, sched: MutationSchedule) -> bool:
    want = highest_weight(sched.target)
    seed = build_initial_seed(sched.algebra, cd, sched.depth)
    if any(x.hw == want for x in seed.assignment.values()):
        return True
    try:
        _, records = run_schedule(seed, sched)
    except QClusterError:
        return False
    return any(r.trusted and r.new.hw == want for r in records)


def run_schedule(
    seed: Seed,
    schedule: MutationSchedule,
    engine: CharacterEngine | None = None,
    payload_budget: int | None = DEFAULT_PAYLOAD_BUDGET,
):
    """Apply a schedule; returns the final seed and every exchange record in order."""
    records = []
    for step in schedule.steps:
        if step.skipped:
            seed = skip(seed, step.vertex)
            continue
        where = f"{step.span}:C{step.column}"
        seed, rec = mutate(seed, step.vertex, engine, len(records), where, payload_budget)
        records.append(rec)
    return seed, records


def plain_schedule(seed: Seed, vertices) -> MutationSchedule:
    """A schedule that mutates the given vertices in order."""
    n = seed.n
    steps = tuple(Step(tuple(v), column_of(seed.algebra, n, v), "manual") for v in vertices)
    return MutationSchedule(seed.algebra, n, seed.depth, steps)


# ---------------------------------------------------------------- matching records


@dataclass(frozen=True)
class Match:
    kind: str
    family: str
    equation: EquationInstance | None = None
    params: tuple = ()

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "family": self.family, "params": dict(self.params)}
        if self.equation is not None:
            out["equation"] = self.equation.to_dict()
        return out


def _product_hw(labels) -> Monomial:
    return monomial_product(highest_weight(x) for x in labels)


def equation_key(eq: EquationInstance) -> tuple:
    lhs = tuple(sorted(highest_weight(x) for x in eq.lhs if not x.is_trivial()))
    rhs = tuple(sorted((_product_hw(eq.rhs_first), _product_hw(eq.rhs_second))))
    return lhs, rhs


def record_key(rec: ExchangeRecord) -> tuple:
    lhs = tuple(sorted(x for x in (rec.old.hw, rec.new.hw) if not x.is_unit()))
    rhs = tuple(sorted((rec.hw_in, rec.hw_out)))
    return lhs, rhs


def _lhs2_offset(family: str, n: int, k: tuple):
    try:
        eq = make_equation(family, n, 0, k)
    except ConstraintViolated:
        return None
    return eq.lhs[1]


def catalog_candidates(rec: ExchangeRecord, n: int, families=None) -> list:
    """Equation instances whose second left factor is the old or new variable."""
    families = families or FAMILIES
    out = []
    for x in (rec.old, rec.new):
        for label in x.labels(n):
            if label.variant == "sl2" or label.is_trivial():
                continue
            for fam in families:
                proto = _lhs2_offset(fam, n, label.k)
                if proto is None or proto.variant != label.variant:
                    continue
                try:
                    out.append(make_equation(fam, n, label.s - proto.s, label.k))
                except ConstraintViolated:
                    continue
    return out


def match_exchange_to_msystem(rec: ExchangeRecord, n: int, families=None) -> Match | None:
    """The M-system equation realised by an exchange record, if any."""
    key = record_key(rec)
    hits = {}
    for eq in catalog_candidates(rec, n, families):
        if equation_key(eq) == key:
            hits.setdefault(eq.family, eq)
    if len(hits) > 1:
        raise AmbiguousMatch(f"record at {rec.vertex} matches {sorted(hits)}")
    if not hits:
        return None
    eq = next(iter(hits.values()))
    return Match("msystem", eq.family, eq, (("s", eq.s), ("k", eq.k)))


def _single_node(label: ModuleLabel):
    nz = [p + 1 for p, x in enumerate(label.k) if x]
    return (nz[0], label.k[nz[0] - 1]) if len(nz) == 1 else None


def match_t_system(rec: ExchangeRecord, cd: CartanData) -> Match | None:
    """Kirillov-Reshetikhin T-system: W_k(s) W_k(s') = W_{k+1} W_{k-1} + prod over neighbours."""
    n = cd.rank
    olds = [x for x in rec.old.labels(n) if _single_node(x)]
    news = [x for x in rec.new.labels(n) if _single_node(x)]
    if not olds or not news:
        return None
    i, k = _single_node(olds[0])
    j, k2 = _single_node(news[0])
    if i != j or k != k2:
        return None
    rows_old = sorted(s for (_, s), _ in rec.old.hw.items())
    rows_new = sorted(s for (_, s), _ in rec.new.hw.items())
    if abs(rows_old[0] - rows_new[0]) != 2 * cd.di(i):
        return None
    both = rec.old.hw * rec.new.hw
    for first, second in ((rec.hw_in, rec.hw_out), (rec.hw_out, rec.hw_in)):
        if first != both:
            continue
        if second.nodes() and not all(cd.c(i, p) < 0 for p in second.nodes()):
            continue
        if i not in first.nodes() or len(first.nodes()) != 1:
            continue
        return Match("tsys", f"T{i}", None, (("node", i), ("length", k)))
    return None


def classify_record(rec: ExchangeRecord, cd: CartanData, families=None) -> Match | None:
    """M-system family if one matches, else the T-system, else None."""
    hit = match_exchange_to_msystem(rec, cd.rank, families)
    if hit is not None:
        return hit
    return match_t_system(rec, cd)


def families_for(algebra: str) -> tuple:
    return PRIMAL_FAMILIES if algebra == "A" else tuple(DUAL_OF.values())
