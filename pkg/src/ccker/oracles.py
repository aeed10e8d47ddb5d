"""Exhaustive ground-truth solvers used to certify kernels and reductions.

Two engines back the solvers.  Constrained (list) coloring and hypergraph
coloring use a depth-first search over colorings with list pruning; the
vertex schedule is a fixed, instance-determined maximum-cardinality order so
that gadget-heavy instances refute in reasonable time.  Rainbow-free
coloring enumerates all q^n colorings in vectorized chunks, directly on the
set semantics, which deliberately shares nothing with the relation encoding
it cross-checks.

Budgets are hard errors.  Full enumeration charges q^n against the budget;
decision mode (``limit`` set) instead charges explored search nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .budget import DEFAULT_SEARCH_BUDGET, charge, resolve_budget
from .instances import (
    CliqueKvInstance,
    CnfFormula,
    GurfcInstance,
    Hypergraph,
    RccInstance,
    RclcInstance,
    UrfcInstance,
)

__all__ = [
    "SolutionSet",
    "solve_rcc",
    "solve_rclc",
    "solve_urfc",
    "solve_hypergraph_qcol",
    "solve_cnf",
    "extend_to_cliques",
    "cliquekv_colorable",
]


@dataclass(frozen=True)
class SolutionSet:
    """All accepted colorings of an instance, sorted lexicographically."""

    q: int
    colorings: tuple[tuple[int, ...], ...]

    @property
    def is_yes(self) -> bool:
        return bool(self.colorings)

    def __len__(self) -> int:
        return len(self.colorings)

    def __iter__(self):
        return iter(self.colorings)

    def __contains__(self, coloring) -> bool:
        return tuple(coloring) in set(self.colorings)


# ---------------------------------------------------------------------------
# Depth-first engine
# ---------------------------------------------------------------------------


def _schedule(n: int, lists, adjacency, groups) -> list[int]:
    """Static maximum-cardinality vertex order: repeatedly take the vertex
    with the most already-scheduled constraint neighbors (graph edges or
    shared constraint tuples), breaking ties toward smaller lists and then
    smaller ids.  Fixed per instance; keeps backtracking local on gadget
    heavy graphs."""
    touch = [set(adjacency[v]) for v in range(n + 1)]
    for group in groups:
        vs = set(group)
        for v in vs:
            touch[v] |= vs - {v}
    count = [0] * (n + 1)
    remaining = set(range(1, n + 1))
    order = []
    while remaining:
        v = max(remaining, key=lambda u: (count[u], -len(lists[u]), -u))
        order.append(v)
        remaining.discard(v)
        for u in touch[v]:
            count[u] += 1
    return order


def _dfs_colorings(n, q, lists, adjacency, checks, limit, budget):
    """Enumerate colorings passing list, edge, and group checks.

    ``checks`` is a list of (vertex_tuple, predicate) pairs; a predicate is
    evaluated on the colors of its vertices as soon as the last of them is
    assigned.  Returns colorings in vertex order, sorted.
    """
    for vs, _ in checks:
        for v in vs:
            if not 1 <= v <= n:
                raise ValueError(f"constraint vertex {v} out of range")
    order = _schedule(n, lists, adjacency, [vs for vs, _ in checks])
    pos = {v: i for i, v in enumerate(order)}
    due: list[list] = [[] for _ in range(n + 1)]
    for vs, pred in checks:
        last = max(pos[v] for v in vs) if vs else -1
        if last < 0:
            if not pred(()):
                return []
        else:
            due[last].append((vs, pred))

    domains = {v: set(lists[v]) for v in range(1, n + 1)}
    colors = [0] * (n + 1)
    solutions: list[tuple[int, ...]] = []
    nodes = 0

    def rec(depth: int) -> bool:
        nonlocal nodes
        if depth == n:
            solutions.append(tuple(colors[1 : n + 1]))
            return limit is not None and len(solutions) >= limit
        v = order[depth]
        for c in sorted(domains[v]):
            nodes += 1
            if nodes > budget:
                charge("coloring search nodes", nodes, budget)
            colors[v] = c
            ok = all(
                pred(tuple(colors[u] for u in vs)) for vs, pred in due[depth]
            )
            removed = []
            if ok:
                for u in adjacency[v]:
                    if colors[u] == 0 and c in domains[u]:
                        domains[u].discard(c)
                        removed.append(u)
                        if not domains[u]:
                            ok = False
                if ok and rec(depth + 1):
                    return True
            for u in removed:
                domains[u].add(c)
            colors[v] = 0
        return False

    rec(0)
    solutions.sort()
    return solutions


def _coloring_budget(n, q, limit, budget):
    b = resolve_budget(budget, DEFAULT_SEARCH_BUDGET)
    if limit is None:
        charge("coloring enumeration", q**n, b)
    return b


def solve_rcc(
    inst: RccInstance, limit: int | None = None, budget: int | None = None
) -> SolutionSet:
    """All proper colorings landing every constraint tuple in the relation."""
    n, q = inst.graph.n, inst.relation.q
    b = _coloring_budget(n, q, limit, budget)
    members = inst.relation._members
    checks = [(t, lambda cs, m=members: cs in m) for t in inst.constraints]
    lists = {v: frozenset(range(1, q + 1)) for v in range(1, n + 1)}
    sols = _dfs_colorings(n, q, lists, inst.graph._adj, checks, limit, b)
    return SolutionSet(q, tuple(sols))


def solve_rclc(
    inst: RclcInstance, limit: int | None = None, budget: int | None = None
) -> SolutionSet:
    """As solve_rcc, additionally respecting the per-vertex color lists."""
    n, q = inst.graph.n, inst.relation.q
    b = _coloring_budget(n, q, limit, budget)
    members = inst.relation._members
    checks = [(t, lambda cs, m=members: cs in m) for t in inst.constraints]
    lists = {v: inst.lists.get(v) for v in range(1, n + 1)}
    sols = _dfs_colorings(n, q, lists, inst.graph._adj, checks, limit, b)
    return SolutionSet(q, tuple(sols))


def solve_hypergraph_qcol(
    h: Hypergraph, q: int, limit: int | None = None, budget: int | None = None
) -> SolutionSet:
    """All q-colorings of the hypergraph with no monochromatic edge."""
    b = _coloring_budget(h.n, q, limit, budget)
    pair_edges = [e for e in h.edges if len(e) == 2]
    adjacency = [set() for _ in range(h.n + 1)]
    for u, v in pair_edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    checks = [
        (e, lambda cs: len(set(cs)) > 1) for e in h.edges if len(e) != 2
    ]
    lists = {v: frozenset(range(1, q + 1)) for v in range(1, h.n + 1)}
    sols = _dfs_colorings(h.n, q, lists, adjacency, checks, limit, b)
    return SolutionSet(q, tuple(sols))


# ---------------------------------------------------------------------------
# Vectorized rainbow-free solver
# ---------------------------------------------------------------------------

_CHUNK_ROWS = 1 << 13
_TUPLE_BATCH = 512


def _coloring_chunks(n: int, q: int):
    """Yield (q^chunk, n) int16 arrays of colorings in lexicographic order."""
    total = q**n
    weights = np.array([q ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    for start in range(0, total, _CHUNK_ROWS):
        codes = np.arange(start, min(start + _CHUNK_ROWS, total), dtype=np.int64)
        digits = (codes[:, None] // weights[None, :]) % q
        yield digits.astype(np.int16) + 1


def _uniformly_rainbow_mask(block_colors: np.ndarray, d: int, l: int) -> np.ndarray:
    """Rows x tuples boolean mask of uniformly rainbow evaluations.

    ``block_colors`` has shape (rows, tuples, l, d): the colors of each
    tuple's sets under each coloring.
    """
    if d == 1:
        return (block_colors == block_colors[:, :, :1, :]).all(axis=(2, 3))
    if d == 2:
        a, b = block_colors[:, :, :, 0], block_colors[:, :, :, 1]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        rainbow = (lo != hi).all(axis=2)
        same = (lo == lo[:, :, :1]).all(axis=2) & (hi == hi[:, :, :1]).all(axis=2)
        return rainbow & same
    srt = np.sort(block_colors, axis=3)
    rainbow = (srt[:, :, :, 1:] != srt[:, :, :, :-1]).all(axis=3)
    same = (srt == srt[:, :, :1, :]).all(axis=(2, 3))
    return rainbow.all(axis=2) & same


def solve_urfc(
    inst: UrfcInstance | GurfcInstance, budget: int | None = None
) -> SolutionSet:
    """All proper colorings with no uniformly rainbow constraint tuple.

    Implemented directly on the set semantics by exhaustive enumeration, so
    it is an independent cross-check of the NUR relation encoding.
    """
    gurfc = inst.as_gurfc() if isinstance(inst, UrfcInstance) else inst
    graph, q = gurfc.graph, gurfc.q
    n = graph.n
    b = resolve_budget(budget, DEFAULT_SEARCH_BUDGET)
    charge("coloring enumeration", q**n, b)

    blocks = []
    for block in gurfc.blocks:
        if block.tuples:
            idx = np.array(
                [[v - 1 for s in tp for v in s] for tp in block.tuples],
                dtype=np.int64,
            )
            blocks.append((block.d, block.l, idx))
    eu = np.array([u - 1 for u, v in graph.edges], dtype=np.int64)
    ev = np.array([v - 1 for u, v in graph.edges], dtype=np.int64)

    solutions: list[tuple[int, ...]] = []
    for chunk in _coloring_chunks(n, q):
        ok = np.ones(chunk.shape[0], dtype=bool)
        if eu.size:
            ok &= (chunk[:, eu] != chunk[:, ev]).all(axis=1)
        for d, l, idx in blocks:
            if not ok.any():
                break
            for start in range(0, idx.shape[0], _TUPLE_BATCH):
                batch = idx[start : start + _TUPLE_BATCH]
                gathered = chunk[:, batch.reshape(-1)].reshape(
                    chunk.shape[0], batch.shape[0], l, d
                )
                ok &= ~_uniformly_rainbow_mask(gathered, d, l).any(axis=1)
                if not ok.any():
                    break
        solutions.extend(map(tuple, chunk[ok].tolist()))
    return SolutionSet(q, tuple(sorted(solutions)))


# ---------------------------------------------------------------------------
# Satisfiability
# ---------------------------------------------------------------------------


def solve_cnf(
    formula: CnfFormula,
    mode: str = "sat",
    limit: int | None = None,
    budget: int | None = None,
) -> tuple[tuple[bool, ...], ...]:
    """All satisfying assignments, in SAT or not-all-equal mode."""
    if mode not in ("sat", "nae"):
        raise ValueError(f"mode must be 'sat' or 'nae', got {mode!r}")
    b = resolve_budget(budget, DEFAULT_SEARCH_BUDGET)
    charge("assignment enumeration", 2**formula.n, b)

    def lit_value(assignment, lit):
        value = assignment[abs(lit) - 1]
        return value if lit > 0 else not value

    out = []
    for assignment in itertools.product((False, True), repeat=formula.n):
        good = True
        for clause in formula.clauses:
            values = [lit_value(assignment, lit) for lit in clause]
            if mode == "sat":
                good = any(values)
            else:
                good = any(values) and not all(values)
            if not good:
                break
        if good:
            out.append(assignment)
            if limit is not None and len(out) >= limit:
                break
    return tuple(out)


# ---------------------------------------------------------------------------
# Clique modulator extension
# ---------------------------------------------------------------------------


def _check_proper_on_modulator(inst: CliqueKvInstance, q: int, coloring):
    for v in inst.modulator:
        if v not in coloring or not 1 <= coloring[v] <= q:
            raise ValueError(f"coloring must assign vertex {v} a color in 1..{q}")
    xs = set(inst.modulator)
    for u, v in inst.graph.edges:
        if u in xs and v in xs and coloring[u] == coloring[v]:
            raise ValueError(f"coloring is not proper on edge ({u},{v})")


def extend_to_cliques(
    inst: CliqueKvInstance, q: int, coloring
) -> dict[int, int] | None:
    """Extend a proper modulator coloring to the whole graph, if possible.

    Each residual clique is handled by a maximum bipartite matching between
    its vertices and their available colors (augmenting paths, deterministic
    vertex order); the extension exists iff every clique is saturated.
    """
    coloring = dict(coloring)
    _check_proper_on_modulator(inst, q, coloring)
    xs = set(inst.modulator)
    result = {v: coloring[v] for v in inst.modulator}
    for clique in inst.cliques:
        avail = {
            v: sorted(
                set(range(1, q + 1))
                - {coloring[u] for u in inst.graph.neighbors(v) if u in xs}
            )
            for v in clique
        }
        color_owner: dict[int, int] = {}

        def try_assign(v, visited) -> bool:
            for c in avail[v]:
                if c in visited:
                    continue
                visited.add(c)
                if c not in color_owner or try_assign(color_owner[c], visited):
                    color_owner[c] = v
                    return True
            return False

        for v in clique:
            if not try_assign(v, set()):
                return None
        for c, v in color_owner.items():
            result[v] = c
    return result


def _proper_modulator_colorings(inst: CliqueKvInstance, q: int):
    xs = list(inst.modulator)
    index = {v: i for i, v in enumerate(xs)}
    colors = [0] * len(xs)

    def rec(i):
        if i == len(xs):
            yield {v: colors[index[v]] for v in xs}
            return
        v = xs[i]
        banned = {
            colors[index[u]]
            for u in inst.graph.neighbors(v)
            if u in index and index[u] < i
        }
        for c in range(1, q + 1):
            if c not in banned:
                colors[i] = c
                yield from rec(i + 1)
        colors[i] = 0

    yield from rec(0)


def cliquekv_colorable(
    inst: CliqueKvInstance, q: int, budget: int | None = None
) -> bool:
    """Brute-force q-colorability: enumerate proper modulator colorings and
    try to extend each across the residual cliques."""
    b = resolve_budget(budget, DEFAULT_SEARCH_BUDGET)
    charge("modulator enumeration", q ** len(inst.modulator), b)
    for coloring in _proper_modulator_colorings(inst, q):
        if extend_to_cliques(inst, q, coloring) is not None:
            return True
    return False
