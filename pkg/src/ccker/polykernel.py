"""Kernelization engines.

Sparse multivariate polynomials over GF(p), Vandermonde-based capture pairs
for the uniformly rainbow property, the polynomial-basis kernel, the
rainbow-free dispatchers, and the product-pruning kernel for constrained
coloring.

Variable layout for capture polynomials: the m x (d*l) matrix of variables is
flattened column-major, variable (row a, column b) (0-based) has index
b*m + a.  When a polynomial is instantiated on a constraint tuple, column b
carries the variable vector of the b-th vertex of the tuple (sets in
canonical order, vertices ascending within each set), and vertex v owns the
global variables (v-1)*m .. (v-1)*m + m - 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .budget import DEFAULT_TUPLE_BUDGET, charge, resolve_budget
from .instances import Graph, GurfcBlock, GurfcInstance, RccInstance, UrfcInstance
from .relations import UrfcShape, eta

__all__ = [
    "PrimeField",
    "SparsePoly",
    "CapturePair",
    "CaptureUnavailableError",
    "smallest_prime_geq",
    "vandermonde_set",
    "det_poly",
    "build_capture",
    "check_captures",
    "kernelize_poly",
    "KernelReport",
    "UrfcKernelResult",
    "GurfcKernelResult",
    "kernelize_urfc",
    "kernelize_gurfc",
    "kernelize_product_pruning",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def smallest_prime_geq(q: int) -> int:
    p = max(2, q)
    while not _is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class PrimeField:
    """GF(p) for prime p; arithmetic is exact integer arithmetic mod p."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)


# A monomial is a tuple of (variable, exponent) pairs, sorted by variable,
# exponents >= 1; the empty tuple is the constant monomial.
Monomial = tuple


def _mono_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    exps: dict[int, int] = {}
    for v, e in itertools.chain(m1, m2):
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_key(mono: Monomial):
    # Graded lexicographic, packaged so that min(key) picks the largest
    # monomial: higher total degree first, then larger exponent on the
    # smallest variable index.
    return (-_mono_degree(mono), tuple((v, -e) for v, e in mono))


class SparsePoly:
    """Multivariate polynomial over GF(p): monomial -> nonzero coefficient."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=None):
        self.p = p
        clean: dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            coeff %= p
            if coeff:
                clean[tuple(mono)] = coeff
        self.terms = clean

    @classmethod
    def const(cls, p: int, value: int) -> "SparsePoly":
        return cls(p, {(): value})

    @classmethod
    def variable(cls, p: int, index: int) -> "SparsePoly":
        return cls(p, {((index, 1),): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return min(self.terms, key=_mono_key)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = (out.get(mono, 0) + coeff) % self.p
        return SparsePoly(self.p, out)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + other.scale(-1)

    def scale(self, factor: int) -> "SparsePoly":
        return SparsePoly(
            self.p, {m: c * factor for m, c in self.terms.items()}
        )

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = (out.get(mono, 0) + c1 * c2) % self.p
        return SparsePoly(self.p, out)

    def rename(self, mapping) -> "SparsePoly":
        """Relabel variables; colliding targets merge exponents."""
        out: dict[Monomial, int] = {}
        for mono, coeff in self.terms.items():
            exps: dict[int, int] = {}
            for v, e in mono:
                t = mapping[v]
                exps[t] = exps.get(t, 0) + e
            key = tuple(sorted(exps.items()))
            out[key] = (out.get(key, 0) + coeff) % self.p
        return SparsePoly(self.p, out)

    def evaluate(self, values) -> int:
        """Evaluate at a point; ``values`` is indexable by variable index."""
        total = 0
        for mono, coeff in self.terms.items():
            term = coeff
            for v, e in mono:
                term = term * pow(values[v], e, self.p) % self.p
            total = (total + term) % self.p
        return total

    def __repr__(self):
        return f"SparsePoly(p={self.p}, terms={len(self.terms)}, degree={self.degree})"


def vandermonde_set(m: int, q: int, field: PrimeField) -> tuple[tuple[int, ...], ...]:
    """q column vectors (1, a_i, a_i^2, ..., a_i^(m-1)) with a_i = i - 1.

    Any t <= m of them, restricted to their first t rows, are linearly
    independent.  Requires p >= q so the points are distinct.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if field.p < q:
        raise ValueError(f"field GF({field.p}) too small for {q} distinct points")
    return tuple(
        tuple(pow(i, a, field.p) for a in range(m)) for i in range(q)
    )


def _sym_det(rows: list[list[SparsePoly]], p: int) -> SparsePoly:
    t = len(rows)
    acc = SparsePoly(p, {})
    for perm in itertools.permutations(range(t)):
        inversions = sum(
            1 for i in range(t) for j in range(i + 1, t) if perm[i] > perm[j]
        )
        prod = SparsePoly.const(p, 1)
        for i in range(t):
            prod = prod * rows[i][perm[i]]
        acc = acc + (prod if inversions % 2 == 0 else prod.scale(-1))
    return acc


def _ones_det(columns: list[list[SparsePoly]], p: int) -> SparsePoly:
    """Determinant of the t x t matrix whose first row is ones and whose
    remaining rows are taken from ``columns`` (each column lists its entries
    for rows 1..t-1)."""
    t = len(columns)
    rows = [[SparsePoly.const(p, 1)] * t]
    for a in range(t - 1):
        rows.append([columns[b][a] for b in range(t)])
    return _sym_det(rows, p)


def det_poly(m: int, t: int, field: PrimeField) -> SparsePoly:
    """The polynomial mapping an m x t matrix to the determinant of its first
    t rows with the first row replaced by ones; degree exactly t - 1.

    On a matrix whose columns come from a Vandermonde set, the value is
    nonzero iff the t columns are pairwise distinct.
    """
    if not 1 <= t <= m:
        raise ValueError(f"need 1 <= t <= m, got t={t}, m={m}")
    columns = [
        [SparsePoly.variable(field.p, b * m + a) for a in range(1, t)]
        for b in range(t)
    ]
    return _ones_det(columns, field.p)


class CaptureUnavailableError(ValueError):
    """No capture construction applies to this (d, l, q) shape."""


@dataclass(frozen=True)
class CapturePair:
    """Color vectors C in GF(p)^m and a polynomial on an m x (d*l) variable
    matrix that is nonzero exactly on the uniformly rainbow C-colored
    matrices."""

    field: PrimeField
    m: int
    d: int
    l: int
    q: int
    colors: tuple[tuple[int, ...], ...]
    poly: SparsePoly
    item: int
    degree_bound: int

    def __post_init__(self):
        if len(self.colors) != self.q:
            raise ValueError("need exactly q color vectors")
        if len(set(self.colors)) != self.q:
            raise ValueError("color vectors must be pairwise distinct")
        if any(len(v) != self.m for v in self.colors):
            raise ValueError("color vectors must have length m")
        if self.poly.degree > self.degree_bound:
            raise ValueError(
                f"polynomial degree {self.poly.degree} exceeds bound "
                f"{self.degree_bound}"
            )


def build_capture(
    d: int, l: int, q: int, field: PrimeField | None = None
) -> CapturePair:
    """Construct a capture pair for the (d, l, q) uniformly rainbow property.

    Three constructions, dispatched in order: for single-set tuples
    (l = 1, q >= d) a d x d ones-row determinant of degree d - 1; for q = d a
    product of one such determinant per set, degree (d-1)*l; for q = d + 1 a
    first-block determinant times, per further block, a determinant extended
    by the column a - y, where a is the sum of all color vectors and y the
    sum of the first block's columns, degree d*l - 1.  Any other shape raises
    CaptureUnavailableError (the trivial kernel applies there).
    """
    UrfcShape(d, l, q)
    if field is None:
        field = PrimeField(smallest_prime_geq(q))
    p = field.p

    def var_column(col: int, m: int) -> list[SparsePoly]:
        return [SparsePoly.variable(p, col * m + a) for a in range(1, m)]

    if l == 1 and q >= d:
        item, m, bound = 1, d, d - 1
        colors = vandermonde_set(m, q, field)
        poly = _ones_det([var_column(b, m)[: d - 1] for b in range(d)], p)
    elif q == d:
        item, m, bound = 2, d, (d - 1) * l
        colors = vandermonde_set(m, q, field)
        poly = SparsePoly.const(p, 1)
        for i in range(l):
            cols = [var_column(i * d + b, m)[: d - 1] for b in range(d)]
            poly = poly * _ones_det(cols, p)
    elif q == d + 1:
        item, m, bound = 3, q, d * l - 1
        colors = vandermonde_set(m, q, field)
        a_vec = [sum(v[a] for v in colors) % p for a in range(m)]
        # a - y as polynomial entries for rows 1..m-1; y sums block 1's columns
        last_col = []
        for a in range(1, m):
            entry = SparsePoly.const(p, a_vec[a])
            for b in range(d):
                entry = entry - SparsePoly.variable(p, b * m + a)
            last_col.append(entry)
        poly = _ones_det([var_column(b, m)[: d - 1] for b in range(d)], p)
        for i in range(1, l):
            cols = [var_column(i * d + b, m) for b in range(d)]
            cols.append(last_col)
            poly = poly * _ones_det(cols, p)
    else:
        raise CaptureUnavailableError(
            f"no capture construction for d={d}, l={l}, q={q}"
        )
    return CapturePair(field, m, d, l, q, colors, poly, item, bound)


def _color_index_chunks(columns: int, q: int, chunk_rows: int = 1 << 14):
    total = q**columns
    weights = np.array(
        [q ** (columns - 1 - i) for i in range(columns)], dtype=np.int64
    )
    for start in range(0, total, chunk_rows):
        codes = np.arange(start, min(start + chunk_rows, total), dtype=np.int64)
        yield (codes[:, None] // weights[None, :]) % q


def check_captures(
    cp: CapturePair,
    d: int | None = None,
    l: int | None = None,
    q: int | None = None,
    budget: int | None = None,
) -> bool:
    """Exhaustively verify the capture property over all q^(d*l) C-colored
    matrices: the polynomial is nonzero exactly on the uniformly rainbow
    ones."""
    d = cp.d if d is None else d
    l = cp.l if l is None else l
    q = cp.q if q is None else q
    if (d, l, q) != (cp.d, cp.l, cp.q):
        raise ValueError("shape does not match the capture pair")
    b = resolve_budget(budget, DEFAULT_TUPLE_BUDGET)
    charge("capture check", q ** (d * l), b)

    p = cp.field.p
    colors = np.array(cp.colors, dtype=np.int64) % p
    terms = list(cp.poly.terms.items())
    for assign in _color_index_chunks(d * l, q):
        rows = assign.shape[0]
        acc = np.zeros(rows, dtype=np.int64)
        for mono, coeff in terms:
            term = np.full(rows, coeff, dtype=np.int64)
            for var, exp in mono:
                col, row = divmod(var, cp.m)
                term *= colors[assign[:, col], row] ** exp
            acc += term % p
        nonzero = (acc % p) != 0

        blocks = assign.reshape(rows, l, d)
        srt = np.sort(blocks, axis=2)
        rainbow = (srt[:, :, 1:] != srt[:, :, :-1]).all(axis=2)
        same = (srt == srt[:, :1, :]).all(axis=(1, 2))
        expected = rainbow.all(axis=1) & same
        if not np.array_equal(nonzero, expected):
            return False
    return True


# ---------------------------------------------------------------------------
# Polynomial-basis kernel
# ---------------------------------------------------------------------------


def _compile_terms(cp: CapturePair):
    """Pre-split each capture monomial into (coefficient, ((col, row, exp)..))
    so instantiation avoids per-variable divmods."""
    m = cp.m
    return [
        (coeff, tuple((var // m, var % m, exp) for var, exp in mono))
        for mono, coeff in cp.poly.terms.items()
    ]


def _instantiate(terms, m, p, flat_vertices, intern):
    """Intern the capture polynomial instantiated on a constraint tuple:
    column b's variables become vertex flat_vertices[b]'s variables.
    Colliding variables (a vertex shared between sets) merge exponents."""
    base = [(v - 1) * m for v in flat_vertices]
    poly: dict[int, int] = {}
    get = poly.get
    for coeff, tvars in terms:
        pairs = sorted((base[col] + row, exp) for col, row, exp in tvars)
        merged = []
        last = -1
        for g, e in pairs:
            if g == last:
                merged[-1] = (g, merged[-1][1] + e)
            else:
                merged.append((g, e))
                last = g
        key = intern(tuple(merged))
        c = (get(key, 0) + coeff) % p
        if c:
            poly[key] = c
        elif key in poly:
            del poly[key]
    return poly


def kernelize_poly(inst: UrfcInstance, cp: CapturePair) -> UrfcInstance:
    """Keep the greedy earliest subset of tuples whose instantiated capture
    polynomials are linearly independent over GF(p).

    Constraints are processed in canonical instance order; the row basis is
    maintained in reduced row-echelon form (one elimination round therefore
    clears every pivot), so a tuple is kept iff its polynomial contributes a
    new pivot.  The surviving collection has the same solution set as the
    input and size at most C(m*n + r, r).
    """
    if (cp.d, cp.l, cp.q) != (inst.d, inst.l, inst.q):
        raise ValueError(
            f"capture shape ({cp.d},{cp.l},{cp.q}) does not match instance "
            f"({inst.d},{inst.l},{inst.q})"
        )
    p = cp.field.p

    mono_ids: dict[tuple, int] = {}
    keys: list = []

    def intern(mono) -> int:
        mid = mono_ids.get(mono)
        if mid is None:
            mid = len(keys)
            mono_ids[mono] = mid
            keys.append(_mono_key(mono))
        return mid

    terms = _compile_terms(cp)
    pivot_rows: dict[int, dict[int, int]] = {}
    kept = []
    for tp in inst.tuples:
        flat = [v for s in tp for v in s]
        poly = _instantiate(terms, cp.m, p, flat, intern)
        get = poly.get
        pop = poly.pop
        while True:
            hits = [mid for mid in poly if mid in pivot_rows]
            if not hits:
                break
            for mid in hits:
                c = get(mid, 0)
                if not c:
                    continue
                for m2, c2 in pivot_rows[mid].items():
                    nc = (get(m2, 0) - c * c2) % p
                    if nc:
                        poly[m2] = nc
                    else:
                        pop(m2, None)
        if not poly:
            continue
        lead = min(poly, key=lambda mid: keys[mid])
        inv = pow(poly[lead], -1, p)
        row = {mid: c * inv % p for mid, c in poly.items()}
        for other in pivot_rows.values():
            c = other.get(lead, 0)
            if c:
                for m2, c2 in row.items():
                    nc = (other.get(m2, 0) - c * c2) % p
                    if nc:
                        other[m2] = nc
                    else:
                        other.pop(m2, None)
        pivot_rows[lead] = row
        kept.append(tp)
    return UrfcInstance(inst.graph, inst.q, inst.d, inst.l, tuple(kept))


# ---------------------------------------------------------------------------
# Rainbow-free kernel dispatch
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelReport:
    """What the kernelizer did to one constraint block."""

    method: str  # "dedup" | "poly" | "solved"
    d: int
    l: int
    q: int
    eta: int
    field_p: int | None = None
    capture_item: int | None = None
    basis_size: int | None = None
    binom_bound: int | None = None
    answer: bool | None = None

    def lines(self) -> list[str]:
        out = [
            f"method={self.method}",
            f"d={self.d}",
            f"l={self.l}",
            f"q={self.q}",
            f"eta={self.eta}",
        ]
        if self.field_p is not None:
            out.append(f"field_p={self.field_p}")
        if self.capture_item is not None:
            out.append(f"capture_item={self.capture_item}")
        if self.basis_size is not None:
            out.append(f"basis_size={self.basis_size}")
        if self.binom_bound is not None:
            out.append(f"binom_bound={self.binom_bound}")
        if self.answer is not None:
            out.append(f"answer={'YES' if self.answer else 'NO'}")
        return out


@dataclass(frozen=True)
class UrfcKernelResult:
    instance: UrfcInstance
    report: KernelReport


@dataclass(frozen=True)
class GurfcKernelResult:
    instance: GurfcInstance
    reports: tuple[KernelReport, ...]


def _bipartite(graph: Graph) -> bool:
    color = [0] * (graph.n + 1)
    for start in range(1, graph.n + 1):
        if color[start]:
            continue
        color[start] = 1
        queue = [start]
        while queue:
            v = queue.pop()
            for u in graph.neighbors(v):
                if not color[u]:
                    color[u] = 3 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def _solve_eta0(inst: UrfcInstance) -> bool:
    """Polynomial-time decision for the shapes with kernel exponent 0."""
    q, d, l = inst.q, inst.d, inst.l
    graph = inst.graph
    if q == 1:
        # any constraint tuple is uniformly rainbow under the only coloring
        return graph.m == 0 and not inst.tuples
    if (d, l) == (1, 1):
        return not inst.tuples and _bipartite(graph)
    if (d, l) == (1, 2):
        edges = set(graph.edges)
        for (x,), (y,) in inst.tuples:
            if x == y:
                return False
            edges.add((min(x, y), max(x, y)))
        return _bipartite(Graph(graph.n, tuple(edges)))
    if (d, l) == (2, 1):
        # a forbidden rainbow pair forces equal colors: merge the vertices
        parent = list(range(graph.n + 1))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for ((x, y),) in inst.tuples:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
        reps = sorted({find(v) for v in range(1, graph.n + 1)})
        index = {r: i + 1 for i, r in enumerate(reps)}
        quotient = set()
        for u, v in graph.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            a, b = index[ru], index[rv]
            quotient.add((min(a, b), max(a, b)))
        return _bipartite(Graph(len(reps), tuple(sorted(quotient))))
    raise AssertionError(f"unexpected eta-0 shape d={d} l={l} q={q}")


def _const_instance(answer: bool, d: int, l: int, q: int) -> UrfcInstance:
    if answer:
        return UrfcInstance(Graph(1, ()), q, d, l, ())
    if q == 1:
        return UrfcInstance(Graph(2, ((1, 2),)), q, d, l, ())
    return UrfcInstance(Graph(3, ((1, 2), (1, 3), (2, 3))), q, d, l, ())


def kernelize_urfc(inst: UrfcInstance) -> UrfcKernelResult:
    """Kernelize one rainbow-free instance, dispatching on its exponent.

    Exponent d*l (or the l = 1, d <= 2 shapes): deduplication only, which the
    canonical instance form already performs.  Exponents d*l - 1 and
    (d-1)*l: polynomial-basis kernel with the matching capture construction.
    Exponent 0: the instance is decided outright and a constant-size
    equivalent instance is emitted.  In all other cases the output is
    (G, F') with F' a subset of F and an identical solution set.
    """
    d, l, q = inst.d, inst.l, inst.q
    e = eta(d, l, q)
    n = inst.graph.n
    if e == 0:
        answer = _solve_eta0(inst)
        return UrfcKernelResult(
            _const_instance(answer, d, l, q),
            KernelReport("solved", d, l, q, e, answer=answer),
        )
    if e == d * l or (l == 1 and d <= 2):
        return UrfcKernelResult(inst, KernelReport("dedup", d, l, q, e))
    cp = build_capture(d, l, q)
    out = kernelize_poly(inst, cp)
    bound = math.comb(cp.m * n + cp.degree_bound, cp.degree_bound)
    assert len(out.tuples) <= bound
    return UrfcKernelResult(
        out,
        KernelReport(
            "poly",
            d,
            l,
            q,
            e,
            field_p=cp.field.p,
            capture_item=cp.item,
            basis_size=len(out.tuples),
            binom_bound=bound,
        ),
    )


def kernelize_gurfc(inst: GurfcInstance) -> GurfcKernelResult:
    """Kernelize each block independently and take the union.

    Every block must have kernel exponent at least 2; a degenerate block is
    an error rather than a silently wrong kernel.
    """
    for b in inst.blocks:
        if eta(b.d, b.l, inst.q) < 2:
            raise ValueError(
                f"block (d={b.d}, l={b.l}) has kernel exponent "
                f"{eta(b.d, b.l, inst.q)} < 2"
            )
    blocks = []
    reports = []
    for b in inst.blocks:
        sub = UrfcInstance(inst.graph, inst.q, b.d, b.l, b.tuples)
        result = kernelize_urfc(sub)
        blocks.append(GurfcBlock(b.d, b.l, result.instance.tuples))
        reports.append(result.report)
    return GurfcKernelResult(
        GurfcInstance(inst.graph, inst.q, tuple(blocks)), tuple(reports)
    )


# ---------------------------------------------------------------------------
# Product-pruning kernel for constrained coloring
# ---------------------------------------------------------------------------


def _find_full_product(members: set, tuples_sorted: list, r: int):
    for i, s in enumerate(tuples_sorted):
        for t in tuples_sorted[i + 1 :]:
            if any(s[j] == t[j] for j in range(r)):
                continue
            domains = [(min(s[j], t[j]), max(s[j], t[j])) for j in range(r)]
            if all(c in members for c in itertools.product(*domains)):
                return domains
    return None


def kernelize_product_pruning(inst: RccInstance) -> RccInstance:
    """Prune constraints until no full product of r vertex pairs remains.

    While some 2-element sets A_1..A_r have their whole product inside the
    constraint collection, the lexicographically last tuple of that product
    is dropped.  Sound whenever no OR relation of arity r is definable from
    the instance relation (the caller may verify via max_or_arity).
    """
    r = inst.relation.r
    if r < 3:
        raise ValueError(f"arity must be at least 3, got {r}")
    members = set(inst.constraints)
    while True:
        found = _find_full_product(members, sorted(members), r)
        if found is None:
            break
        members.remove(tuple(hi for _, hi in found))
    return RccInstance(
        inst.graph, inst.relation, tuple(sorted(members)), inst.nur_shape
    )
