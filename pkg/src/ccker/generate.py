"""Seeded random instance generation.

All generators draw from one ``random.Random(seed)``; identical arguments
produce identical instances.  Densities are fractions of the full canonical
constraint space, so density 1.0 yields every possible edge or tuple.
"""

from __future__ import annotations

import itertools
import random

from .instances import (
    CliqueKvInstance,
    CnfFormula,
    Graph,
    GurfcBlock,
    GurfcInstance,
    Hypergraph,
    ListAssignment,
    RccInstance,
    RclcInstance,
    UrfcInstance,
)
from .relations import Relation, UrfcShape

__all__ = [
    "gen_graph",
    "gen_urfc",
    "gen_gurfc",
    "gen_rcc",
    "gen_rclc",
    "gen_cnf",
    "gen_cliquekv",
    "gen_hypergraph",
]


def _sample(rng: random.Random, pool: list, density: float) -> list:
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    count = round(density * len(pool))
    return rng.sample(pool, count)


def _edges(rng: random.Random, n: int, density: float):
    return _sample(rng, list(itertools.combinations(range(1, n + 1), 2)), density)


def gen_graph(n: int, density: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph(n, tuple(_edges(rng, n, density)))


def _all_tuples(n: int, d: int, l: int) -> list:
    sets = list(itertools.combinations(range(1, n + 1), d))
    return list(itertools.combinations_with_replacement(sets, l))


def gen_urfc(
    n: int,
    d: int,
    l: int,
    q: int,
    density: float = 0.5,
    edge_density: float = 0.3,
    seed: int = 0,
) -> UrfcInstance:
    UrfcShape(d, l, q)
    rng = random.Random(seed)
    edges = _edges(rng, n, edge_density)
    tuples = _sample(rng, _all_tuples(n, d, l), density)
    return UrfcInstance(Graph(n, tuple(edges)), q, d, l, tuple(tuples))


def gen_gurfc(
    n: int,
    q: int,
    shapes,
    density: float = 0.5,
    edge_density: float = 0.3,
    seed: int = 0,
) -> GurfcInstance:
    rng = random.Random(seed)
    edges = _edges(rng, n, edge_density)
    blocks = []
    for d, l in shapes:
        blocks.append(
            GurfcBlock(d, l, tuple(_sample(rng, _all_tuples(n, d, l), density)))
        )
    return GurfcInstance(Graph(n, tuple(edges)), q, tuple(blocks))


def gen_rcc(
    n: int,
    relation: Relation,
    density: float = 0.3,
    edge_density: float = 0.2,
    seed: int = 0,
    nur_shape: UrfcShape | None = None,
) -> RccInstance:
    rng = random.Random(seed)
    edges = _edges(rng, n, edge_density)
    pool = list(itertools.product(range(1, n + 1), repeat=relation.r))
    constraints = _sample(rng, pool, density)
    return RccInstance(Graph(n, tuple(edges)), relation, tuple(constraints), nur_shape)


def gen_rclc(
    n: int,
    relation: Relation,
    density: float = 0.3,
    edge_density: float = 0.2,
    seed: int = 0,
    min_list: int = 1,
    nur_shape: UrfcShape | None = None,
) -> RclcInstance:
    rng = random.Random(seed)
    q = relation.q
    edges = _edges(rng, n, edge_density)
    pool = list(itertools.product(range(1, n + 1), repeat=relation.r))
    constraints = _sample(rng, pool, density)
    lists = tuple(
        frozenset(rng.sample(range(1, q + 1), rng.randint(min(min_list, q), q)))
        for _ in range(n)
    )
    return RclcInstance(
        Graph(n, tuple(edges)),
        relation,
        tuple(constraints),
        ListAssignment(q, lists),
        nur_shape,
    )


def gen_cnf(n: int, k: int, m: int, seed: int = 0) -> CnfFormula:
    if k > n:
        raise ValueError(f"clause width {k} exceeds variable count {n}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        vs = sorted(rng.sample(range(1, n + 1), k))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


def gen_cliquekv(
    k: int,
    t: int,
    n_cliques: int = 3,
    seed: int = 0,
    edge_density: float = 0.4,
    attach_density: float = 0.5,
) -> CliqueKvInstance:
    """Modulator of k vertices plus ``n_cliques`` residual cliques of random
    size 1..t, each clique vertex wired to a random modulator subset."""
    rng = random.Random(seed)
    edges = set(_edges(rng, k, edge_density))
    n = k
    for _ in range(n_cliques):
        size = rng.randint(1, t)
        fresh = list(range(n + 1, n + size + 1))
        n += size
        for e in itertools.combinations(fresh, 2):
            edges.add(e)
        for v in fresh:
            for x in range(1, k + 1):
                if rng.random() < attach_density:
                    edges.add((x, v))
    return CliqueKvInstance(
        Graph(n, tuple(sorted(edges))), tuple(range(1, k + 1))
    )


def gen_hypergraph(
    n: int, l: int, density: float = 0.2, seed: int = 0
) -> Hypergraph:
    rng = random.Random(seed)
    pool = list(itertools.combinations(range(1, n + 1), l))
    return Hypergraph(n, tuple(_sample(rng, pool, density)))
