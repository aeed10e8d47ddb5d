"""Problem-instance data model and line-oriented text formats.

All instance types are immutable and canonical after construction: edges are
stored as sorted (u, v) pairs with u < v, rainbow-freeness tuples have their
sets sorted and the sets ordered lexicographically, and constraint lists are
sorted and deduplicated.  Parsers produce the canonical form, so
serialize(parse(text)) == canonical(text) and parse(serialize(x)) == x.

Text formats are line oriented; ``#`` starts a comment (DIMACS cnf uses its
own ``c`` comments).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .relations import Relation, UrfcShape, make_nur

__all__ = [
    "ParseError",
    "NotCliqueError",
    "Graph",
    "ListAssignment",
    "RccInstance",
    "RclcInstance",
    "UrfcInstance",
    "GurfcBlock",
    "GurfcInstance",
    "CliqueKvInstance",
    "Hypergraph",
    "CnfFormula",
    "canonicalize_urfc_tuple",
    "validate_clique_kv",
    "parse",
    "serialize",
    "PARSERS",
]


class ParseError(ValueError):
    """Syntax or semantic error in an instance file, with a line position."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class NotCliqueError(ValueError):
    """A component of G minus the modulator is not a complete graph."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n; no loops, no parallel edges."""

    n: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {self.n}")
        canon = []
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range 1..{self.n}")
            if u == v:
                raise ValueError(f"loop edge at vertex {u}")
            canon.append((u, v) if u < v else (v, u))
        if len(set(canon)) != len(canon):
            dup = next(e for e in canon if canon.count(e) > 1)
            raise ValueError(f"duplicate edge {dup}")
        canon.sort()
        adj = [set() for _ in range(self.n + 1)]
        for u, v in canon:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def induced(self, vertices) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on the given vertices, renumbered 1..k in sorted
        order; also returns the old-to-new vertex mapping."""
        vs = sorted(set(vertices))
        mapping = {v: i + 1 for i, v in enumerate(vs)}
        edges = [
            (mapping[u], mapping[v])
            for u, v in self.edges
            if u in mapping and v in mapping
        ]
        return Graph(len(vs), tuple(edges)), mapping


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex color lists over [q]; an empty list is legal (forces NO)."""

    q: int
    lists: tuple[frozenset, ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        lists = tuple(frozenset(s) for s in self.lists)
        for i, s in enumerate(lists):
            if any(not 1 <= c <= self.q for c in s):
                raise ValueError(f"list of vertex {i + 1} not a subset of 1..{self.q}")
        object.__setattr__(self, "lists", lists)

    @property
    def n(self) -> int:
        return len(self.lists)

    def get(self, v: int) -> frozenset:
        return self.lists[v - 1]


def _canonical_constraints(graph: Graph, relation: Relation, constraints):
    canon = set()
    for t in constraints:
        t = tuple(t)
        if len(t) != relation.r:
            raise ValueError(f"constraint {t} does not have arity {relation.r}")
        if any(not 1 <= x <= graph.n for x in t):
            raise ValueError(f"constraint {t} has vertices outside 1..{graph.n}")
        canon.add(t)
    return tuple(sorted(canon))


@dataclass(frozen=True)
class RccInstance:
    """Constrained coloring: proper q-coloring of the graph whose restriction
    to every constraint tuple lies in the relation."""

    graph: Graph
    relation: Relation
    constraints: tuple[tuple[int, ...], ...]
    nur_shape: UrfcShape | None = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "constraints",
            _canonical_constraints(self.graph, self.relation, self.constraints),
        )
        if self.nur_shape is not None:
            s = self.nur_shape
            if s.arity != self.relation.r or s.q != self.relation.q:
                raise ValueError("nur shape does not match relation dimensions")

    @property
    def constraint_count(self) -> int:
        return self.graph.m + len(self.constraints)


@dataclass(frozen=True)
class RclcInstance:
    """Constrained list coloring: RccInstance plus per-vertex color lists."""

    graph: Graph
    relation: Relation
    constraints: tuple[tuple[int, ...], ...]
    lists: ListAssignment
    nur_shape: UrfcShape | None = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "constraints",
            _canonical_constraints(self.graph, self.relation, self.constraints),
        )
        if self.lists.q != self.relation.q:
            raise ValueError("list q does not match relation domain size")
        if self.lists.n != self.graph.n:
            raise ValueError("list assignment does not cover every vertex")
        if self.nur_shape is not None:
            s = self.nur_shape
            if s.arity != self.relation.r or s.q != self.relation.q:
                raise ValueError("nur shape does not match relation dimensions")

    @property
    def constraint_count(self) -> int:
        return self.graph.m + len(self.constraints)


def canonicalize_urfc_tuple(sets, d: int) -> tuple[tuple[int, ...], ...]:
    """Sort each set ascending and order the sets lexicographically.

    Repeated sets inside a tuple are allowed; repeated vertices inside one
    set are not (each set must have exactly d distinct vertices).
    """
    canon = []
    for s in sets:
        s = tuple(sorted(s))
        if len(set(s)) != len(s) or len(s) != d:
            raise ValueError(f"set {s} does not have {d} distinct vertices")
        canon.append(s)
    return tuple(sorted(canon))


def _canonical_urfc_tuples(graph: Graph, d: int, tuples, l: int):
    canon = set()
    for tp in tuples:
        tp = canonicalize_urfc_tuple(tp, d)
        if len(tp) != l:
            raise ValueError(f"tuple {tp} does not have {l} sets")
        for s in tp:
            if any(not 1 <= v <= graph.n for v in s):
                raise ValueError(f"set {s} has vertices outside 1..{graph.n}")
        canon.add(tp)
    return tuple(sorted(canon))


@dataclass(frozen=True)
class UrfcInstance:
    """Rainbow-free coloring instance: graph plus l-tuples of d-subsets."""

    graph: Graph
    q: int
    d: int
    l: int
    tuples: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        UrfcShape(self.d, self.l, self.q)
        object.__setattr__(
            self,
            "tuples",
            _canonical_urfc_tuples(self.graph, self.d, self.tuples, self.l),
        )

    @property
    def shape(self) -> UrfcShape:
        return UrfcShape(self.d, self.l, self.q)

    @property
    def constraint_count(self) -> int:
        return self.graph.m + len(self.tuples)

    def flat_tuples(self) -> tuple[tuple[int, ...], ...]:
        """Each tuple flattened column-major, matching the NUR relation layout."""
        return tuple(tuple(v for s in tp for v in s) for tp in self.tuples)

    def as_gurfc(self) -> "GurfcInstance":
        return GurfcInstance(
            self.graph, self.q, (GurfcBlock(self.d, self.l, self.tuples),)
        )


@dataclass(frozen=True)
class GurfcBlock:
    d: int
    l: int
    tuples: tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class GurfcInstance:
    """Generalized rainbow-free coloring: several (d_i, l_i) constraint blocks
    sharing one graph and color count."""

    graph: Graph
    q: int
    blocks: tuple[GurfcBlock, ...]

    def __post_init__(self):
        shapes = set()
        canon = []
        for b in self.blocks:
            UrfcShape(b.d, b.l, self.q)
            if (b.d, b.l) in shapes:
                raise ValueError(f"duplicate block shape ({b.d},{b.l})")
            shapes.add((b.d, b.l))
            canon.append(
                GurfcBlock(
                    b.d, b.l, _canonical_urfc_tuples(self.graph, b.d, b.tuples, b.l)
                )
            )
        object.__setattr__(self, "blocks", tuple(canon))

    @property
    def constraint_count(self) -> int:
        return self.graph.m + sum(len(b.tuples) for b in self.blocks)


def validate_clique_kv(graph: Graph, modulator) -> tuple[tuple[int, ...], ...]:
    """Partition G minus the modulator into cliques, or raise NotCliqueError.

    Returns the connected components of the remainder, each verified to be
    complete, sorted by smallest vertex.
    """
    xs = set(modulator)
    if any(not 1 <= v <= graph.n for v in xs):
        raise ValueError("modulator vertex out of range")
    rest = [v for v in range(1, graph.n + 1) if v not in xs]
    seen = set()
    comps = []
    for start in rest:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in sorted(graph.neighbors(v)):
                if u not in xs and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comp.sort()
        for u, v in itertools.combinations(comp, 2):
            if not graph.has_edge(u, v):
                raise NotCliqueError(
                    f"component containing vertex {comp[0]} is not a clique: "
                    f"missing edge ({u},{v})"
                )
        comps.append(tuple(comp))
    return tuple(comps)


@dataclass(frozen=True)
class CliqueKvInstance:
    """Graph with a modulator X whose removal leaves disjoint cliques."""

    graph: Graph
    modulator: tuple[int, ...]
    cliques: tuple[tuple[int, ...], ...] = field(init=False, default=())

    def __post_init__(self):
        mod = tuple(sorted(set(self.modulator)))
        if len(mod) != len(self.modulator):
            raise ValueError("modulator has repeated vertices")
        object.__setattr__(self, "modulator", mod)
        object.__setattr__(self, "cliques", validate_clique_kv(self.graph, mod))

    @property
    def k(self) -> int:
        return len(self.modulator)

    @property
    def max_clique_size(self) -> int:
        return max((len(c) for c in self.cliques), default=0)


@dataclass(frozen=True)
class Hypergraph:
    """Hypergraph with duplicate-free edges, each a set of distinct vertices."""

    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        canon = []
        for e in self.edges:
            e = tuple(sorted(e))
            if len(set(e)) != len(e) or not e:
                raise ValueError(f"edge {e} is empty or has repeated vertices")
            if any(not 1 <= v <= self.n for v in e):
                raise ValueError(f"edge {e} out of range 1..{self.n}")
            canon.append(e)
        if len(set(canon)) != len(canon):
            dup = next(e for e in canon if canon.count(e) > 1)
            raise ValueError(f"duplicate edge {dup}")
        object.__setattr__(self, "edges", tuple(sorted(canon, key=lambda e: (len(e), e))))

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_uniform(self, l: int) -> bool:
        return all(len(e) == l for e in self.edges)


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables 1..n; clauses are tuples of nonzero signed literals."""

    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("variable count must be nonnegative")
        canon = []
        for cl in self.clauses:
            cl = tuple(cl)
            if not cl:
                raise ValueError("empty clause")
            for lit in cl:
                if lit == 0 or not 1 <= abs(lit) <= self.n:
                    raise ValueError(f"literal {lit} out of range in clause {cl}")
            if len({abs(lit) for lit in cl}) != len(cl):
                raise ValueError(f"clause {cl} repeats a variable")
            canon.append(cl)
        object.__setattr__(self, "clauses", tuple(canon))

    def validate_width(self, k: int) -> None:
        for cl in self.clauses:
            if len(cl) != k:
                raise ValueError(f"clause {cl} does not have width {k}")

    @property
    def width(self) -> int | None:
        """Common clause width, or None if empty or mixed."""
        widths = {len(cl) for cl in self.clauses}
        return widths.pop() if len(widths) == 1 else None


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _Reader:
    """Iterator over non-blank, non-comment lines with position tracking."""

    def __init__(self, text: str, comment: str = "#"):
        self.rows = []
        for i, raw in enumerate(text.splitlines(), start=1):
            line = raw.split(comment, 1)[0].strip() if comment else raw.strip()
            if line:
                self.rows.append((i, line))
        self.pos = 0

    def peek(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else (None, None)

    def next(self, what: str):
        if self.pos >= len(self.rows):
            raise ParseError(f"unexpected end of input, expected {what}")
        row = self.rows[self.pos]
        self.pos += 1
        return row

    def at_end(self) -> bool:
        return self.pos >= len(self.rows)


def _kv_line(line: str, lineno: int, head: str, keys: tuple[str, ...]) -> dict:
    parts = line.split()
    if not parts or parts[0] != head:
        raise ParseError(f"expected '{head}' line, got {line!r}", lineno)
    if len(parts) != 1 + len(keys):
        raise ParseError(f"'{head}' line needs fields {keys}", lineno)
    out = {}
    for part, key in zip(parts[1:], keys):
        if not part.startswith(key + "="):
            raise ParseError(f"expected '{key}=<int>', got {part!r}", lineno)
        try:
            out[key] = int(part[len(key) + 1 :])
        except ValueError:
            raise ParseError(f"bad integer in {part!r}", lineno) from None
    return out


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line!r}", lineno) from None


def _read_graph(reader: _Reader) -> Graph:
    lineno, line = reader.next("graph header")
    head = _kv_line(line, lineno, "graph", ("n", "m"))
    n, m = head["n"], head["m"]
    edges = []
    seen = set()
    for _ in range(m):
        lineno, line = reader.next("edge line")
        parts = line.split()
        if len(parts) != 3 or parts[0] != "e":
            raise ParseError(f"expected 'e u v', got {line!r}", lineno)
        u, v = _ints(" ".join(parts[1:]), lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge ({u},{v}) out of range 1..{n}", lineno)
        if u == v:
            raise ParseError(f"loop edge at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge ({u},{v})", lineno)
        seen.add(key)
        edges.append(key)
    return Graph(n, tuple(edges))


def parse_graph(text: str) -> Graph:
    reader = _Reader(text)
    g = _read_graph(reader)
    if not reader.at_end():
        lineno, line = reader.peek()
        raise ParseError(f"trailing content {line!r}", lineno)
    return g


def parse_relation(text: str) -> tuple[Relation, UrfcShape | None]:
    """Parse a relation file: explicit listing or single-line nur shorthand."""
    reader = _Reader(text)
    lineno, line = reader.next("relation header")
    if line.split()[0] == "nur":
        head = _kv_line(line, lineno, "nur", ("d", "l", "q"))
        if not reader.at_end():
            raise ParseError("nur shorthand must be the only content", reader.peek()[0])
        shape = UrfcShape(head["d"], head["l"], head["q"])
        return make_nur(shape.d, shape.l, shape.q), shape
    head = _kv_line(line, lineno, "relation", ("q", "r"))
    q, r = head["q"], head["r"]
    tuples = []
    while not reader.at_end():
        lineno, line = reader.next("relation tuple")
        vals = _ints(line, lineno)
        if len(vals) != r:
            raise ParseError(f"tuple needs {r} entries, got {len(vals)}", lineno)
        if any(not 1 <= x <= q for x in vals):
            raise ParseError(f"tuple entry out of range 1..{q}", lineno)
        tuples.append(tuple(vals))
    return Relation(q, r, tuple(tuples)), None


def _read_relation_block(
    reader: _Reader, relation_loader=None
) -> tuple[Relation, UrfcShape | None]:
    lineno, line = reader.next("rel line")
    parts = line.split()
    if parts[0] != "rel":
        raise ParseError(f"expected 'rel ...', got {line!r}", lineno)
    body = parts[1:]
    if not body:
        raise ParseError("empty rel line", lineno)
    if body[0] == "nur":
        head = _kv_line(" ".join(body), lineno, "nur", ("d", "l", "q"))
        shape = UrfcShape(head["d"], head["l"], head["q"])
        return make_nur(shape.d, shape.l, shape.q), shape
    if body[0].startswith("file="):
        if relation_loader is None:
            raise ParseError("relation file references are not available here", lineno)
        return relation_loader(body[0][len("file=") :])
    head = _kv_line(line, lineno, "rel", ("q", "r", "count"))
    q, r, count = head["q"], head["r"], head["count"]
    tuples = []
    for _ in range(count):
        tl, tline = reader.next("relation tuple")
        vals = _ints(tline, tl)
        if len(vals) != r:
            raise ParseError(f"tuple needs {r} entries, got {len(vals)}", tl)
        if any(not 1 <= x <= q for x in vals):
            raise ParseError(f"tuple entry out of range 1..{q}", tl)
        tuples.append(tuple(vals))
    return Relation(q, r, tuple(tuples)), None


def _read_constraints(reader: _Reader, r: int, n: int):
    constraints = []
    while not reader.at_end():
        lineno, line = reader.next("constraint")
        vals = _ints(line, lineno)
        if len(vals) != r:
            raise ParseError(f"constraint needs {r} vertex ids, got {len(vals)}", lineno)
        if any(not 1 <= v <= n for v in vals):
            raise ParseError(f"constraint vertex out of range 1..{n}", lineno)
        constraints.append(tuple(vals))
    return constraints


def parse_rcc(text: str, relation_loader=None) -> RccInstance:
    reader = _Reader(text)
    graph = _read_graph(reader)
    relation, shape = _read_relation_block(reader, relation_loader)
    constraints = _read_constraints(reader, relation.r, graph.n)
    return RccInstance(graph, relation, tuple(constraints), shape)


def parse_rclc(text: str, relation_loader=None) -> RclcInstance:
    reader = _Reader(text)
    graph = _read_graph(reader)
    relation, shape = _read_relation_block(reader, relation_loader)
    lists: dict[int, frozenset] = {}
    while not reader.at_end() and reader.peek()[1].startswith("list "):
        lineno, line = reader.next("list line")
        body = line[len("list ") :]
        if ":" not in body:
            raise ParseError("list line needs 'list v: colors'", lineno)
        vtxt, ctxt = body.split(":", 1)
        v = _ints(vtxt, lineno)[0]
        if not 1 <= v <= graph.n:
            raise ParseError(f"list vertex {v} out of range", lineno)
        if v in lists:
            raise ParseError(f"duplicate list for vertex {v}", lineno)
        colors = _ints(ctxt, lineno)
        if any(not 1 <= c <= relation.q for c in colors):
            raise ParseError(f"list color out of range 1..{relation.q}", lineno)
        lists[v] = frozenset(colors)
    missing = [v for v in range(1, graph.n + 1) if v not in lists]
    if missing:
        raise ParseError(f"missing list line for vertex {missing[0]}")
    constraints = _read_constraints(reader, relation.r, graph.n)
    assignment = ListAssignment(
        relation.q, tuple(lists[v] for v in range(1, graph.n + 1))
    )
    return RclcInstance(graph, relation, tuple(constraints), assignment, shape)


def _read_colors(reader: _Reader) -> int:
    lineno, line = reader.next("colors line")
    return _kv_line(line, lineno, "colors", ("q",))["q"]


def _read_block(reader: _Reader, n: int):
    lineno, line = reader.next("block header")
    head = _kv_line(line, lineno, "block", ("d", "l", "count"))
    d, l, count = head["d"], head["l"], head["count"]
    tuples = []
    for _ in range(count):
        tl, tline = reader.next("tuple line")
        vals = _ints(tline, tl)
        if len(vals) != d * l:
            raise ParseError(f"tuple needs {d * l} vertex ids, got {len(vals)}", tl)
        if any(not 1 <= v <= n for v in vals):
            raise ParseError(f"tuple vertex out of range 1..{n}", tl)
        sets = [vals[j * d : (j + 1) * d] for j in range(l)]
        try:
            tuples.append(canonicalize_urfc_tuple(sets, d))
        except ValueError as exc:
            raise ParseError(str(exc), tl) from None
    return d, l, tuples


def parse_urfc(text: str) -> UrfcInstance:
    reader = _Reader(text)
    graph = _read_graph(reader)
    q = _read_colors(reader)
    d, l, tuples = _read_block(reader, graph.n)
    if not reader.at_end():
        raise ParseError("urfc instance must have exactly one block", reader.peek()[0])
    return UrfcInstance(graph, q, d, l, tuple(tuples))


def parse_gurfc(text: str) -> GurfcInstance:
    reader = _Reader(text)
    graph = _read_graph(reader)
    q = _read_colors(reader)
    blocks = []
    while not reader.at_end():
        d, l, tuples = _read_block(reader, graph.n)
        blocks.append(GurfcBlock(d, l, tuple(tuples)))
    if not blocks:
        raise ParseError("gurfc instance needs at least one block")
    return GurfcInstance(graph, q, tuple(blocks))


def parse_cliquekv(text: str) -> CliqueKvInstance:
    reader = _Reader(text)
    graph = _read_graph(reader)
    lineno, line = reader.next("modulator header")
    k = _kv_line(line, lineno, "modulator", ("k",))["k"]
    ids: list[int] = []
    while len(ids) < k:
        lineno, line = reader.next("modulator vertices")
        ids.extend(_ints(line, lineno))
    if len(ids) != k:
        raise ParseError(f"expected exactly {k} modulator vertices", lineno)
    if not reader.at_end():
        raise ParseError(f"trailing content {reader.peek()[1]!r}", reader.peek()[0])
    for v in ids:
        if not 1 <= v <= graph.n:
            raise ParseError(f"modulator vertex {v} out of range")
    if len(set(ids)) != len(ids):
        raise ParseError("modulator has repeated vertices")
    return CliqueKvInstance(graph, tuple(ids))


def parse_hypergraph(text: str) -> Hypergraph:
    reader = _Reader(text)
    lineno, line = reader.next("hgraph header")
    head = _kv_line(line, lineno, "hgraph", ("n", "m"))
    n, m = head["n"], head["m"]
    edges = []
    seen = set()
    for _ in range(m):
        lineno, line = reader.next("hyperedge line")
        parts = line.split()
        if parts[0] != "he":
            raise ParseError(f"expected 'he s v1 ... vs', got {line!r}", lineno)
        vals = _ints(" ".join(parts[1:]), lineno)
        if not vals or vals[0] != len(vals) - 1:
            raise ParseError("hyperedge size does not match vertex count", lineno)
        e = vals[1:]
        if len(set(e)) != len(e):
            raise ParseError("hyperedge repeats a vertex", lineno)
        if any(not 1 <= v <= n for v in e):
            raise ParseError(f"hyperedge vertex out of range 1..{n}", lineno)
        key = tuple(sorted(e))
        if key in seen:
            raise ParseError(f"duplicate hyperedge {key}", lineno)
        seen.add(key)
        edges.append(key)
    if not reader.at_end():
        raise ParseError(f"trailing content {reader.peek()[1]!r}", reader.peek()[0])
    return Hypergraph(n, tuple(edges))


def parse_cnf(text: str) -> CnfFormula:
    """DIMACS cnf: 'p cnf n m' header, clauses as 0-terminated literal runs."""
    tokens: list[tuple[int, str]] = []
    header = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if header is not None:
                raise ParseError("duplicate 'p' header", i)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad header {line!r}", i)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"bad header {line!r}", i) from None
            continue
        for tok in line.split():
            tokens.append((i, tok))
    if header is None:
        raise ParseError("missing 'p cnf' header")
    n, m = header
    clauses = []
    current: list[int] = []
    for lineno, tok in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise ParseError(f"bad literal {tok!r}", lineno) from None
        if lit == 0:
            if not current:
                raise ParseError("empty clause", lineno)
            clauses.append(tuple(current))
            current = []
        else:
            if not 1 <= abs(lit) <= n:
                raise ParseError(f"literal {lit} out of range", lineno)
            current.append(lit)
    if current:
        raise ParseError("unterminated clause at end of input")
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    try:
        return CnfFormula(n, tuple(clauses))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


PARSERS = {
    "graph": parse_graph,
    "relation": parse_relation,
    "rcc": parse_rcc,
    "rclc": parse_rclc,
    "urfc": parse_urfc,
    "gurfc": parse_gurfc,
    "cliquekv": parse_cliquekv,
    "hypergraph": parse_hypergraph,
    "cnf": parse_cnf,
}


def parse(kind: str, text: str, **kwargs):
    if kind not in PARSERS:
        raise ValueError(f"unknown instance kind {kind!r}")
    return PARSERS[kind](text, **kwargs)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _graph_lines(graph: Graph) -> list[str]:
    lines = [f"graph n={graph.n} m={graph.m}"]
    lines.extend(f"e {u} {v}" for u, v in graph.edges)
    return lines


def _relation_lines(relation: Relation, shape: UrfcShape | None) -> list[str]:
    if shape is not None:
        return [f"rel nur d={shape.d} l={shape.l} q={shape.q}"]
    lines = [f"rel q={relation.q} r={relation.r} count={len(relation.tuples)}"]
    lines.extend(" ".join(map(str, t)) for t in relation.tuples)
    return lines


def _block_lines(d: int, l: int, tuples) -> list[str]:
    lines = [f"block d={d} l={l} count={len(tuples)}"]
    for tp in tuples:
        lines.append(" ".join(str(v) for s in tp for v in s))
    return lines


def serialize(obj) -> str:
    """Canonical text form of any instance type; inverse of parse."""
    if isinstance(obj, Graph):
        lines = _graph_lines(obj)
    elif isinstance(obj, Relation):
        lines = [f"relation q={obj.q} r={obj.r}"]
        lines.extend(" ".join(map(str, t)) for t in obj.tuples)
    elif isinstance(obj, RclcInstance):
        lines = _graph_lines(obj.graph)
        lines.extend(_relation_lines(obj.relation, obj.nur_shape))
        for v in range(1, obj.graph.n + 1):
            colors = " ".join(map(str, sorted(obj.lists.get(v))))
            lines.append(f"list {v}:{' ' + colors if colors else ''}")
        lines.extend(" ".join(map(str, t)) for t in obj.constraints)
    elif isinstance(obj, RccInstance):
        lines = _graph_lines(obj.graph)
        lines.extend(_relation_lines(obj.relation, obj.nur_shape))
        lines.extend(" ".join(map(str, t)) for t in obj.constraints)
    elif isinstance(obj, UrfcInstance):
        lines = _graph_lines(obj.graph)
        lines.append(f"colors q={obj.q}")
        lines.extend(_block_lines(obj.d, obj.l, obj.tuples))
    elif isinstance(obj, GurfcInstance):
        lines = _graph_lines(obj.graph)
        lines.append(f"colors q={obj.q}")
        for b in obj.blocks:
            lines.extend(_block_lines(b.d, b.l, b.tuples))
    elif isinstance(obj, CliqueKvInstance):
        lines = _graph_lines(obj.graph)
        lines.append(f"modulator k={obj.k}")
        if obj.modulator:
            lines.append(" ".join(map(str, obj.modulator)))
    elif isinstance(obj, Hypergraph):
        lines = [f"hgraph n={obj.n} m={obj.m}"]
        lines.extend(
            f"he {len(e)} " + " ".join(map(str, e)) if e else "he 0" for e in obj.edges
        )
    elif isinstance(obj, CnfFormula):
        lines = [f"p cnf {obj.n} {len(obj.clauses)}"]
        lines.extend(" ".join(map(str, cl)) + " 0" for cl in obj.clauses)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"
