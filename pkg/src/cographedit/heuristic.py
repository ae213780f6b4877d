"""Vertex-by-vertex cograph editing heuristics.

Vertices are inserted one at a time into a cotree.  Each new vertex gets
the cheapest neighbourhood the tree can realize, either by adding edges
(its neighbourhood grows) or by removing them (the same computation with
the node labels swapped).  The variants differ in how the next vertex is
picked and how many partial solutions are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import _tree
from .cotree import Cotree, _from_arrays, _to_arrays
from .errors import DomainError
from .graph import Graph, edit_set

VARIANTS = ("standard", "modify", "choose-multiple", "beam-search", "choose-all")
DEFAULT_REPS = {"beam-search": 10, "choose-all": 1}
INSERT, DELETE = "insert", "delete"


@dataclass(frozen=True)
class VariantConfig:
    variant: str = "standard"
    repetitions: int | None = None
    candidates: int = 10
    beam_width: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown heuristic variant {self.variant!r}")
        if self.repetitions is None:
            object.__setattr__(self, "repetitions", DEFAULT_REPS.get(self.variant, 100))
        if self.repetitions < 1 or self.candidates < 1 or self.beam_width < 1:
            raise DomainError("repetitions, candidates and beam width must be positive")


class HeuristicResult(NamedTuple):
    graph: Graph
    edits: frozenset
    cost: int
    cotree: Cotree | None


def _fill_to_edits(v: int, nb, out) -> frozenset:
    return edit_set((v, int(u)) for u in np.flatnonzero(out != nb))


def minimal_fill_for_insertion(h: Cotree | None, v: int, nbrs) -> frozenset:
    """Fewest edges ``(v, u)`` to add so ``h`` plus ``v`` stays a cograph.

    ``nbrs`` are the neighbours ``v`` must keep.  A fill of minimum size is
    also inclusion-minimal.
    """
    nbrs = set(nbrs)
    verts = [] if h is None else h.leaves()
    if v in verts:
        raise DomainError(f"vertex {v} is already in the cotree")
    if not nbrs <= set(verts):
        raise DomainError("neighbours must be vertices of the cotree")
    n = max(verts + [v]) + 1
    nodes, leafmap, meta = _to_arrays(h, n)
    inserted = np.zeros(n, np.uint8)
    inserted[verts] = 1
    nb = np.zeros(n, np.uint8)
    nb[list(nbrs)] = 1
    _, out = _tree.tree_fill(nodes, leafmap, meta, nb, inserted)
    return _fill_to_edits(v, nb, out)


class HeuristicState:
    """A partial solution: cotree over the inserted vertices plus its edits."""

    def __init__(self, g: Graph):
        self.adj_g = g.to_matrix()
        n = g.n
        self.nodes, self.leafmap, self.meta = _tree.new_tree(n)
        self.adj_h = np.zeros((n, n), np.uint8)
        self.inserted = np.zeros(n, np.uint8)
        self.order: list[int] = []
        self.cost = 0

    @property
    def n(self) -> int:
        return self.adj_g.shape[0]

    def copy(self) -> HeuristicState:
        s = HeuristicState.__new__(HeuristicState)
        s.adj_g = self.adj_g
        s.nodes = self.nodes.copy()
        s.leafmap = self.leafmap.copy()
        s.meta = self.meta.copy()
        s.adj_h = self.adj_h.copy()
        s.inserted = self.inserted.copy()
        s.order = list(self.order)
        s.cost = self.cost
        return s

    def remaining(self) -> np.ndarray:
        return np.flatnonzero(self.inserted == 0)

    def insert(self, v: int, modify: bool = False) -> int:
        if self.inserted[v]:
            raise DomainError(f"vertex {v} is already inserted")
        c = _tree.insert_vertex(self.nodes, self.leafmap, self.meta, self.adj_g,
                                self.adj_h, self.inserted, v, modify)
        self.order.append(v)
        self.cost += int(c)
        return int(c)

    def step_costs(self, cands) -> np.ndarray:
        return _tree.candidate_costs(self.nodes, self.leafmap, self.meta, self.adj_g,
                                     self.inserted, np.asarray(cands, np.int64))

    def key(self) -> bytes:
        return self.inserted.tobytes() + self.adj_h.tobytes()

    def edits(self) -> frozenset:
        mask = self.inserted.astype(bool)
        diff = np.triu((self.adj_h != self.adj_g) & mask[:, None] & mask[None, :], 1)
        return frozenset((int(u), int(v)) for u, v in zip(*np.nonzero(diff)))

    def graph(self) -> Graph:
        return Graph.from_matrix(self.adj_h)

    def cotree(self) -> Cotree | None:
        return _from_arrays(self.nodes, self.meta)


def step_choose_side(state: HeuristicState, v: int, modify: bool = False) -> tuple[str, frozenset]:
    """Insert ``v`` on the cheaper side; a tie goes to inserting edges."""
    if state.inserted[v]:
        raise DomainError(f"vertex {v} is already inserted")
    n = state.n
    order, m, m2, acc, accinf = _tree._scratch(n)
    nb = (state.adj_g[v] & state.inserted).astype(np.uint8)
    cost, side, t, u = _tree.choose_step(state.nodes, state.leafmap, state.meta, nb,
                                         state.inserted, modify, order, m, m2, acc, accinf)
    out = np.zeros(n, np.uint8)
    _tree.apply_step(state.nodes, state.leafmap, state.meta, nb, state.inserted, v,
                     side, t, u, out, order, m)
    mask = state.inserted.astype(bool)
    state.adj_h[v, mask] = out[mask]
    state.adj_h[mask, v] = out[mask]
    state.inserted[v] = 1
    state.order.append(v)
    state.cost += int(cost)
    return (INSERT if side == 0 else DELETE), _fill_to_edits(v, nb, out)


# -- variants --------------------------------------------------------------

def _pick(state: HeuristicState, cands: np.ndarray) -> int:
    """Cheapest candidate; equal costs go to the lowest vertex index."""
    cands = np.sort(cands)
    return int(cands[int(np.argmin(state.step_costs(cands)))])


def _sample(rng, pool: np.ndarray, k: int) -> np.ndarray:
    if len(pool) <= k:
        return pool
    return rng.choice(pool, size=k, replace=False)


def _run_order(g: Graph, adj_g, order, modify: bool) -> HeuristicState:
    s = HeuristicState.__new__(HeuristicState)
    s.adj_g = adj_g
    s.adj_h, total, s.nodes, s.leafmap, s.meta = _tree.run_order(adj_g, np.asarray(order, np.int64), modify)
    s.inserted = np.ones(g.n, np.uint8)
    s.order = [int(v) for v in order]
    s.cost = int(total)
    return s


def _choose(g: Graph, rng, k: int | None) -> HeuristicState:
    s = HeuristicState(g)
    for _ in range(g.n):
        pool = s.remaining()
        s.insert(_pick(s, pool if k is None else _sample(rng, pool, k)))
    return s


def _beam(g: Graph, rng, k: int, width: int) -> HeuristicState:
    beams = [HeuristicState(g)]
    for _ in range(g.n):
        scored = []
        for bi, b in enumerate(beams):
            cands = np.sort(_sample(rng, b.remaining(), k))
            for v, c in zip(cands, b.step_costs(cands)):
                scored.append((b.cost + int(c), bi, int(v)))
        scored.sort()
        nxt, keys = [], set()
        for _, bi, v in scored:
            child = beams[bi].copy()
            child.insert(v)
            key = child.key()
            if key in keys:
                continue
            keys.add(key)
            nxt.append(child)
            if len(nxt) == width:
                break
        beams = nxt
    return min(beams, key=lambda b: b.cost)


def run_heuristic(g: Graph, cfg: VariantConfig | None = None, seed: int | None = None) -> HeuristicResult:
    """Best cograph over ``cfg.repetitions`` independent runs.

    Run ``i`` draws from ``SeedSequence([seed, i])``, so results depend only
    on the seed and configuration.  Earlier runs win ties.
    """
    cfg = cfg or VariantConfig()
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    if g.n == 0:
        return HeuristicResult(g, frozenset(), 0, None)
    adj_g = g.to_matrix()
    best = None
    for rep in range(cfg.repetitions):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, rep]))
        if cfg.variant in ("standard", "modify"):
            s = _run_order(g, adj_g, rng.permutation(g.n), cfg.variant == "modify")
        elif cfg.variant == "choose-multiple":
            s = _choose(g, rng, cfg.candidates)
        elif cfg.variant == "choose-all":
            s = _choose(g, rng, None)
        else:
            s = _beam(g, rng, cfg.candidates, cfg.beam_width)
        if best is None or s.cost < best.cost:
            best = s
        if best.cost == 0:
            break
    h = best.graph()
    return HeuristicResult(h, best.edits(), best.cost, best.cotree())
