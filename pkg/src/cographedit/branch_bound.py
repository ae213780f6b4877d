"""Branch and bound over constrained bipartitions of one subset.

This is the readable reference for the inner minimum of the exact dynamic
program.  The jitted engine in :mod:`cographedit._dp` follows the same
search step for step (pair choice, queue order, leaf order), so its
statistics can be checked against this module on small inputs.

A subproblem fixes the join type ``lam`` and a set of constraints: groups
of vertices that must stay on one side, and frozen pairs of groups that
must be split apart.  Two bounds drive pruning.  Merging groups ``a`` and
``b`` costs at least ``f(a | b) - f(a) - f(b)`` more; separating them costs
at least their crossing cost under ``lam``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .cotree import PARALLEL, SERIES
from .errors import DomainError
from .exact import ProblemVariant, _variant, _weights, gray_bipartitions
from .graph import Graph, WeightMatrix, highest, members, popcount

DEFAULT_THRESHOLD = 4


class ConstraintForest:
    """Union-find over the vertices of ``x`` plus a list of frozen opposite pairs."""

    __slots__ = ("parent", "rank", "mask", "opp")

    def __init__(self, x: int):
        verts = members(x)
        self.parent = {v: v for v in verts}
        self.rank = {v: 0 for v in verts}
        self.mask = {v: 1 << v for v in verts}
        self.opp: list[tuple[int, int]] = []

    def copy(self) -> ConstraintForest:
        c = ConstraintForest.__new__(ConstraintForest)
        c.parent = dict(self.parent)
        c.rank = dict(self.rank)
        c.mask = dict(self.mask)
        c.opp = list(self.opp)
        return c

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.mask[ra] |= self.mask.pop(rb)
        return ra

    def group_of(self, v: int) -> int:
        return self.mask[self.find(v)]

    def frozen(self) -> int:
        out = 0
        for a, b in self.opp:
            out |= a | b
        return out

    def active(self) -> list[int]:
        """Groups not in any opposite pair, ordered by smallest member."""
        fz = self.frozen()
        groups = [m for m in self.mask.values() if not m & fz]
        return sorted(groups, key=lambda m: m & -m)


@dataclass
class Subproblem:
    lam: str
    forest: ConstraintForest
    bound: float = 0.0

    @property
    def active(self) -> list[int]:
        return self.forest.active()

    @property
    def opp(self) -> list[tuple[int, int]]:
        return self.forest.opp


@dataclass
class BBContext:
    """Everything the bounds need: graph, weights, finished table, variant."""

    g: Graph
    w: WeightMatrix
    f: np.ndarray
    variant: ProblemVariant
    sentinel: float

    @classmethod
    def build(cls, g: Graph, w: WeightMatrix | None, f, variant="editing") -> BBContext:
        w = _weights(g, w)
        return cls(g, w, np.asarray(f), _variant(variant), 1.0 + w.total())


@dataclass
class BBResult:
    cost: float
    y: int
    kind: str
    stats: dict = field(default_factory=dict)


def root_subproblems(x: int) -> tuple[Subproblem, Subproblem]:
    if popcount(x) < 4:
        raise DomainError("subsets below four vertices are base cases")
    return Subproblem(SERIES, ConstraintForest(x)), Subproblem(PARALLEL, ConstraintForest(x))


def _crossing(g: Graph, w: WeightMatrix, a: int, b: int) -> tuple[float, float, int, int]:
    """(edge weight, non-edge weight, edge count, non-edge count) between a and b."""
    par = ser = 0.0
    pe = sn = 0
    for u in members(a):
        row = g.rows[u]
        for v in members(b):
            if (row >> v) & 1:
                par += w.w[u, v]
                pe += 1
            else:
                ser += w.w[u, v]
                sn += 1
    return par, ser, pe, sn


def _lam_cost(cr, lam: str, variant: ProblemVariant, sent: float) -> float:
    par, ser, pe, sn = cr
    if lam == PARALLEL:
        if variant is ProblemVariant.COMPLETION:
            return 0.0 if pe == 0 else sent
        return par
    if variant is ProblemVariant.DELETION:
        return 0.0 if sn == 0 else sent
    return ser


def _typed_cost(cr, variant: ProblemVariant, sent: float) -> tuple[float, str]:
    cp = _lam_cost(cr, PARALLEL, variant, sent)
    cs = _lam_cost(cr, SERIES, variant, sent)
    return (cp, PARALLEL) if cp <= cs else (cs, SERIES)


def lower_bound_increment_same(fval, a: int, b: int) -> float:
    return float(fval[a | b] - fval[a] - fval[b])


def _same_inc(ctx: BBContext, x: int, a: int, b: int) -> float:
    # merging everything leaves no proper split
    if a | b == x:
        return ctx.sentinel
    return lower_bound_increment_same(ctx.f, a, b)


def lower_bound_increment_opp(g: Graph, w: WeightMatrix | None, lam: str, a: int, b: int,
                              variant="editing") -> float:
    """Crossing cost between ``a`` and ``b`` that a ``lam`` join must pay.

    For deletion and completion a forbidden edit saturates at the sentinel
    ``1 + total weight``.
    """
    if a & b:
        raise DomainError("groups must be disjoint")
    w = _weights(g, w)
    return _lam_cost(_crossing(g, w, a, b), lam, _variant(variant), 1.0 + w.total())


def branch(ctx: BBContext, p: Subproblem, x: int, a: int, b: int) -> tuple[Subproblem, Subproblem]:
    """Children forcing ``a`` and ``b`` together, and apart."""
    act = p.active
    if a not in act or b not in act or a == b:
        raise DomainError("branching needs two distinct active groups")
    s = _same_inc(ctx, x, a, b)
    o = _lam_cost(_crossing(ctx.g, ctx.w, a, b), p.lam, ctx.variant, ctx.sentinel)
    same = Subproblem(p.lam, p.forest.copy(), min(p.bound + s, ctx.sentinel))
    same.forest.union(highest(a), highest(b))
    opp = Subproblem(p.lam, p.forest.copy(), min(p.bound + o, ctx.sentinel))
    opp.forest.opp.append((a, b))
    return same, opp


def select_pair(ctx: BBContext, p: Subproblem, x: int) -> tuple[int, int]:
    """Active pair maximizing the smaller child bound, then the larger one.

    Remaining ties go to the first pair in order of smallest members.
    """
    act = p.active
    if len(act) < 2:
        raise DomainError("need two active groups to branch")
    best = None
    pick = None
    for i in range(len(act)):
        for j in range(i + 1, len(act)):
            a, b = act[i], act[j]
            cs = min(p.bound + _same_inc(ctx, x, a, b), ctx.sentinel)
            co = min(p.bound + _lam_cost(_crossing(ctx.g, ctx.w, a, b), p.lam,
                                         ctx.variant, ctx.sentinel), ctx.sentinel)
            key = (min(cs, co), max(cs, co))
            if best is None or key > best:
                best = key
                pick = (a, b)
    return pick


def consistent_splits(p: Subproblem, x: int) -> list[int]:
    """Every ``y`` side (holding the top vertex of ``x``) allowed by ``p``.

    The order matches the leaf enumeration of the search.
    """
    vbit = 1 << highest(x)
    comps = [(g, 0) for g in p.active] + list(p.opp)
    fixed = next(i for i, (a, b) in enumerate(comps) if (a | b) & vbit)
    ybase = comps[fixed][0] if comps[fixed][0] & vbit else comps[fixed][1]
    free = [c for i, c in enumerate(comps) if i != fixed]
    out = []
    for pat in range(1 << len(free)):
        y = ybase
        for bit, (a, b) in enumerate(free):
            y |= a if (pat >> bit) & 1 else b
        if y != x:
            out.append(y)
    return out


def greedy_split(g: Graph, x: int) -> int:
    """Split ``x`` by the closed neighbourhood of its highest-degree vertex."""
    h = max(members(x), key=lambda v: (popcount(g.rows[v] & x), -v))
    y = (g.rows[h] & x) | (1 << h)
    if y == x:
        y = 1 << h
    return y if y >> highest(x) & 1 else x ^ y


def solve_subset_bb(g: Graph, w: WeightMatrix | None, x: int, f, incumbent: float = math.inf,
                    *, variant="editing", threshold: int = DEFAULT_THRESHOLD,
                    best_first: bool = True) -> BBResult:
    """Inner minimum of the recurrence for ``x`` by branch and bound.

    ``f`` must hold final values for every proper subset of ``x``.  The
    greedy split seeds the incumbent; an external ``incumbent`` only prunes
    subproblems whose bound strictly exceeds it, so the returned split is
    always an actual optimum.
    """
    ctx = BBContext.build(g, w, f, variant)
    k = popcount(x)
    stats = {"expanded": 0, "evaluated": 0, "pruned": 0, "screened": 0}

    def value(y):
        c, kind = _typed_cost(_crossing(ctx.g, ctx.w, y, x ^ y), ctx.variant, ctx.sentinel)
        return float(ctx.f[y] + ctx.f[x ^ y] + c), kind

    if k <= threshold:
        best = None
        for y, _ in gray_bipartitions(x):
            stats["evaluated"] += 1
            val, kind = value(y)
            if best is None or val < best[0]:
                best = (val, y, kind)
        return BBResult(*best, stats)

    by = greedy_split(g, x)
    best, bt = value(by)
    stats["evaluated"] += 1
    seen = {by}

    def dead(bound):
        return bound >= best or bound > incumbent

    ser_root, par_root = root_subproblems(x)
    frontier = [(0.0, 0, ser_root), (0.0, 1, par_root)]
    if not best_first:
        frontier.reverse()
    seq = 2
    while frontier:
        p = heapq.heappop(frontier)[2] if best_first else frontier.pop()[2]
        if dead(p.bound):
            stats["pruned"] += 1
            continue
        stats["expanded"] += 1
        act = p.active
        if len(act) <= threshold or len(act) < 2:
            osum = sum(_lam_cost(_crossing(ctx.g, ctx.w, a, b), p.lam, ctx.variant, ctx.sentinel)
                       for a, b in p.opp)
            for y in consistent_splits(p, x):
                if dead(ctx.f[y] + ctx.f[x ^ y] + osum):
                    stats["screened"] += 1
                    continue
                if y in seen:
                    continue
                seen.add(y)
                stats["evaluated"] += 1
                val, kind = value(y)
                if val < best:
                    best, by, bt = val, y, kind
            continue
        same, opp = branch(ctx, p, x, *select_pair(ctx, p, x))
        children = [(same, seq), (opp, seq + 1)]
        seq += 2
        kept = []
        for c, s in children:
            if dead(c.bound):
                stats["pruned"] += 1
            else:
                kept.append((c.bound, s, c))
        if best_first:
            for item in kept:
                heapq.heappush(frontier, item)
        else:
            frontier.extend(reversed(kept))
    return BBResult(best, by, bt, stats)
