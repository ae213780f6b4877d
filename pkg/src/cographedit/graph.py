"""Graphs, weights, edit sets and subset masks.

Vertices are dense integers ``0..n-1``.  Each adjacency row is a Python
``int`` used as a bitset, so a row is a single machine word for small
``n`` and grows transparently for the heuristic-scale graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import DimensionError, DomainError

EditSet = frozenset  # frozenset[tuple[int, int]] of canonical (min, max) pairs


# -- subset masks ----------------------------------------------------------

def mask_of(vertices: Iterable[int]) -> int:
    x = 0
    for v in vertices:
        x |= 1 << v
    return x


def members(x: int) -> list[int]:
    """Vertices of mask ``x`` in increasing order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def highest(x: int) -> int:
    """The pinned vertex of a subset: its highest-index member."""
    if x <= 0:
        raise DomainError("empty subset has no highest vertex")
    return x.bit_length() - 1


def popcount(x: int) -> int:
    return bin(x).count("1")


# -- edit sets -------------------------------------------------------------

def edit_set(pairs: Iterable[tuple[int, int]]) -> frozenset:
    out = set()
    for u, v in pairs:
        if u == v:
            raise DomainError(f"self-pair ({u}, {v}) is not a valid edit")
        out.add((u, v) if u < v else (v, u))
    return frozenset(out)


def edit_cost(f: Iterable[tuple[int, int]], w: "WeightMatrix | None" = None) -> float:
    if w is None:
        return float(len(f))
    return float(sum(w[u, v] for u, v in f))


# -- graphs ----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise DimensionError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full or (row >> u) & 1:
                raise DomainError(f"row {u} has out-of-range bits or a self-loop")
        for u, row in enumerate(self.rows):
            for v in members(row):
                if not (self.rows[v] >> u) & 1:
                    raise DomainError(f"adjacency is not symmetric at ({u}, {v})")

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << u) for u in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, a) -> Graph:
        a = np.asarray(a)
        n = a.shape[0]
        rows = []
        for u in range(n):
            row = 0
            for v in np.flatnonzero(a[u]):
                if v != u:
                    row |= 1 << int(v)
            rows.append(row)
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, u: int) -> int:
        return self.rows[u]

    def degree(self, u: int) -> int:
        return popcount(self.rows[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in members(self.rows[u] >> (u + 1)):
                yield u, u + 1 + v

    @property
    def m(self) -> int:
        return sum(popcount(r) for r in self.rows) // 2

    def density(self) -> float:
        pairs = comb(self.n, 2)
        return self.m / pairs if pairs else 0.0

    def to_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def __repr__(self):
        return f"Graph(n={self.n}, edges={list(self.edges())})"


class WeightMatrix:
    """Symmetric nonnegative pair weights; the diagonal is never read."""

    __slots__ = ("n", "w")

    def __init__(self, w):
        w = np.array(w, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionError(f"weight matrix must be square, got shape {w.shape}")
        np.fill_diagonal(w, 0.0)
        if not np.array_equal(w, w.T):
            raise DomainError("weight matrix is not symmetric")
        if (w < 0).any() or not np.isfinite(w).all():
            raise DomainError("weights must be finite and nonnegative")
        w.setflags(write=False)
        self.n = w.shape[0]
        self.w = w

    @classmethod
    def unit(cls, n: int) -> WeightMatrix:
        return cls(np.ones((n, n)))

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[tuple[int, int, float]]) -> WeightMatrix:
        w = np.ones((n, n))
        for u, v, x in triples:
            w[u, v] = w[v, u] = x
        return cls(w)

    def __getitem__(self, uv):
        u, v = uv
        return float(self.w[u, v])

    def scaled(self, c: float) -> WeightMatrix:
        return WeightMatrix(self.w * c)

    def total(self) -> float:
        return float(np.triu(self.w, 1).sum())


# -- operations ------------------------------------------------------------

def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full ^ row ^ (1 << u) for u, row in enumerate(g.rows)))


def induced_subgraph(g: Graph, x: int) -> Graph:
    """``g[x]`` with the members of ``x`` renumbered densely in order."""
    if x >> g.n:
        raise DomainError("subset mask has bits beyond n")
    verts = members(x)
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        row = 0
        for u in members(g.rows[v] & x):
            row |= 1 << index[u]
        rows.append(row)
    return Graph(len(verts), tuple(rows))


def apply_edits(g: Graph, f: Iterable[tuple[int, int]]) -> Graph:
    rows = list(g.rows)
    for u, v in f:
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
            raise DomainError(f"invalid pair ({u}, {v}) for n={g.n}")
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
    return Graph(g.n, tuple(rows))


def diff_pairs(g1: Graph, g2: Graph) -> frozenset:
    """The edit set turning ``g1`` into ``g2``."""
    if g1.n != g2.n:
        raise DimensionError(f"graphs have {g1.n} and {g2.n} vertices")
    out = []
    for u in range(g1.n):
        for v in members((g1.rows[u] ^ g2.rows[u]) >> (u + 1)):
            out.append((u, u + 1 + v))
    return frozenset(out)


def distance(g1: Graph, g2: Graph) -> int:
    if g1.n != g2.n:
        raise DimensionError(f"graphs have {g1.n} and {g2.n} vertices")
    return sum(popcount(a ^ b) for a, b in zip(g1.rows, g2.rows)) // 2


def normalized_distance(g1: Graph, g2: Graph) -> float:
    if g1.n != g2.n:
        raise DimensionError(f"graphs have {g1.n} and {g2.n} vertices")
    if g1.n < 2:
        raise DomainError("normalized distance needs at least 2 vertices")
    return distance(g1, g2) / comb(g1.n, 2)


def all_pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


# -- text formats ----------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    try:
        return _parse_graph(text)
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(f"malformed graph file: {e}") from None


def _parse_graph(text: str) -> Graph:
    tokens = [line.split() for line in text.splitlines()]
    tokens = [t for t in tokens if t and not t[0].startswith("#")]
    if not tokens or len(tokens[0]) != 2:
        raise DomainError("graph file must start with a line 'n m'")
    n, m = int(tokens[0][0]), int(tokens[0][1])
    body = tokens[1:]
    if len(body) != m:
        raise DomainError(f"header declares {m} edges but {len(body)} follow")
    edges = []
    for t in body:
        if len(t) != 2:
            raise DomainError(f"malformed edge line: {' '.join(t)!r}")
        edges.append((int(t[0]), int(t[1])))
    g = Graph.from_edges(n, edges)
    if g.m != m:
        raise DomainError("edge list contains duplicate edges")
    return g


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g))


def parse_weights(text: str, n: int) -> WeightMatrix:
    triples = []
    for line in text.splitlines():
        t = line.split()
        if not t or t[0].startswith("#"):
            continue
        if len(t) != 3:
            raise DomainError(f"malformed weight line: {line!r}")
        try:
            u, v, x = int(t[0]), int(t[1]), float(t[2])
        except ValueError:
            raise DomainError(f"malformed weight line: {line!r}") from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise DomainError(f"weight pair ({u}, {v}) invalid for n={n}")
        triples.append((u, v, x))
    return WeightMatrix.from_triples(n, triples)


def read_weights(path, n: int) -> WeightMatrix:
    return parse_weights(Path(path).read_text(), n)
