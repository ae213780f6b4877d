"""Exact weighted cograph editing, deletion and completion.

``f(X)`` is the cheapest way to edit ``G[X]`` into a cograph.  Subsets with
fewer than four vertices cost nothing; otherwise ``X`` is split into a part
``Y`` holding the highest-index vertex and the rest, and the two halves are
joined by a parallel node (delete crossing edges) or a series node (insert
crossing non-edges)::

    f(X) = min_Y  f(Y) + f(X - Y) + min(par_cost(Y, X - Y), ser_cost(Y, X - Y))

The table has one entry per subset, so time is O(3^n) splits and memory
O(2^n).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from . import _dp
from .cotree import Cotree, PARALLEL, SERIES, build_cotree, canonical, leaf
from .errors import DimensionError, DomainError, SizeExceeded
from .graph import (
    Graph,
    WeightMatrix,
    highest,
    induced_subgraph,
    members,
    popcount,
)

DEFAULT_MAX_N = 26


class ProblemVariant(enum.Enum):
    EDITING = "editing"
    DELETION = "deletion"
    COMPLETION = "completion"

    @property
    def code(self) -> int:
        return {"editing": _dp.EDITING, "deletion": _dp.DELETION,
                "completion": _dp.COMPLETION}[self.value]


def _variant(v) -> ProblemVariant:
    return v if isinstance(v, ProblemVariant) else ProblemVariant(v)


def _weights(g: Graph, w: WeightMatrix | None) -> WeightMatrix:
    if w is None:
        return WeightMatrix.unit(g.n)
    if w.n != g.n:
        raise DimensionError(f"weights are {w.n}x{w.n} but the graph has {g.n} vertices")
    return w


def _check_disjoint(a: int, b: int) -> None:
    if a & b:
        raise DomainError("crossing costs need disjoint vertex sets")


def par_cost(g: Graph, w: WeightMatrix | None, a: int, b: int) -> float:
    """Weight of the edges between ``a`` and ``b`` (deleted by a parallel join)."""
    _check_disjoint(a, b)
    w = _weights(g, w)
    return float(sum(w[u, v] for u in members(a) for v in members(g.rows[u] & b)))


def ser_cost(g: Graph, w: WeightMatrix | None, a: int, b: int) -> float:
    """Weight of the non-edges between ``a`` and ``b`` (inserted by a series join)."""
    _check_disjoint(a, b)
    w = _weights(g, w)
    return float(sum(w[u, v] for u in members(a) for v in members(b & ~g.rows[u])))


def gray_bipartitions(x: int) -> Iterator[tuple[int, int]]:
    """Splits ``(y, x - y)`` with the top vertex in ``y`` and ``y != x``.

    The other side ``x - y`` runs through the reflected Gray code over the
    remaining vertices, skipping its empty first word, so every split
    differs from the one before by a single moved vertex.  That vertex is
    yielded along with ``y``; the first split reports the vertex that left
    ``x``.
    """
    if popcount(x) < 2:
        raise DomainError("need at least two vertices to split")
    rest = members(x ^ (1 << highest(x)))
    y = x
    for i in range(1, 1 << len(rest)):
        u = rest[(i & -i).bit_length() - 1]
        y ^= 1 << u
        yield y, u


def gray_trace(g: Graph, w: WeightMatrix | None, x: int) -> list[tuple[int, int, float, float]]:
    """The jitted enumeration's splits of ``x`` with its running crossing sums.

    Each entry is ``(y, moved vertex, par_cost, ser_cost)`` as maintained
    incrementally, for checking against :func:`par_cost` / :func:`ser_cost`.
    """
    if popcount(x) < 2 or x >> g.n:
        raise DomainError("need a subset of at least two vertices")
    t = _Tables(g, _weights(g, w))
    ys, moved, sums = _dp.gray_trace(*t.args(), g.n, x)
    return [(int(y), int(m), float(s[0]), float(s[1])) for y, m, s in zip(ys, moved, sums)]


@dataclass
class DPTable:
    """Filled subset table: ``f[x]`` plus the recorded optimal split per subset.

    ``kind[x]`` is 0 for a parallel join, 1 for series, -1 for the base case.
    """

    n: int
    variant: ProblemVariant
    f: np.ndarray
    choice: np.ndarray
    kind: np.ndarray
    stats: dict = field(default_factory=dict)


class ExactSolution(NamedTuple):
    cost: float
    edits: frozenset
    cotree: Cotree | None
    stats: dict


def memory_estimate(n: int, inner: str = "gray") -> int:
    """Bytes needed by the subset table (costs, choices, node types).

    Branch and bound adds one stamp per subset recording which splits were
    already fully evaluated.
    """
    return (1 << n) * (8 + 4 + 1 + (4 if inner == "bb" else 0))


class _Tables:
    def __init__(self, g: Graph, w: WeightMatrix):
        adj = g.to_matrix()
        self.lo, self.hi, self.pc_lo, self.pc_hi, self.half, self.rows = _dp.build_tables(adj, w.w)
        self.n = g.n
        self.sentinel = 1.0 + w.total()

    def args(self):
        return self.lo, self.hi, self.pc_lo, self.pc_hi, self.half


def solve_table(g: Graph, w: WeightMatrix | None = None, variant="editing", *,
                inner: str = "gray", threshold: int = 4, best_first: bool = True,
                max_n: int = DEFAULT_MAX_N) -> DPTable:
    variant = _variant(variant)
    w = _weights(g, w)
    if g.n > max_n:
        raise SizeExceeded(g.n, max_n)
    if inner not in ("gray", "bb"):
        raise DomainError(f"unknown inner engine {inner!r}")
    if threshold < 1:
        raise DomainError("enumeration threshold must be at least 1")
    n = g.n
    f = np.zeros(1 << n)
    choice = np.zeros(1 << n, np.int32)
    kind = np.full(1 << n, -1, np.int8)
    stats = np.zeros(4, np.int64)
    if n >= 4:
        t = _Tables(g, w)
        _dp.fill_table(*t.args(), t.rows, n, variant.code, t.sentinel,
                       0 if inner == "gray" else 1, threshold, best_first,
                       f, choice, kind, stats)
    return DPTable(n, variant, f, choice, kind, {
        "inner": inner,
        "expanded": int(stats[0]),
        "evaluated": int(stats[1]),
        "pruned": int(stats[2]),
        "screened": int(stats[3]),
    })


def _relabel(t: Cotree, verts: list[int]) -> Cotree:
    if t.is_leaf:
        return leaf(verts[t.vertex])
    return Cotree(t.kind, None, tuple(_relabel(c, verts) for c in t.children))


def backtrace(g: Graph, table: DPTable) -> tuple[frozenset, Cotree | None]:
    """Edit set and cotree of the recorded optimal solution."""
    if g.n == 0:
        return frozenset(), None
    edits = []

    def build(x: int) -> Cotree:
        if popcount(x) < 4:
            return _relabel(build_cotree(induced_subgraph(g, x)), members(x))
        y = int(table.choice[x])
        z = x ^ y
        if table.kind[x] == _dp.PAR:
            for u in members(y):
                edits.extend((min(u, v), max(u, v)) for v in members(g.rows[u] & z))
            kind = PARALLEL
        else:
            for u in members(y):
                edits.extend((min(u, v), max(u, v)) for v in members(z & ~g.rows[u]))
            kind = SERIES
        return Cotree(kind, None, (build(y), build(z)))

    t = canonical(build((1 << g.n) - 1))
    return frozenset(edits), t


def solve_exact(g: Graph, w: WeightMatrix | None = None, variant="editing", *,
                inner: str = "gray", threshold: int = 4, best_first: bool = True,
                max_n: int = DEFAULT_MAX_N) -> ExactSolution:
    """Minimum-weight edit set turning ``g`` into a cograph.

    ``inner`` selects how each subset's best split is found: ``"gray"``
    enumerates all splits, ``"bb"`` runs branch and bound; both return the
    same optimal cost.
    """
    table = solve_table(g, w, variant, inner=inner, threshold=threshold,
                        best_first=best_first, max_n=max_n)
    cost = float(table.f[-1]) if g.n else 0.0
    edits, t = backtrace(g, table)
    return ExactSolution(cost, edits, t, table.stats)
