"""Random cographs, P4-introducing noise and the evaluation metrics.

A true cograph is grown by merging bins of vertices; each merge joins
the two bins completely with probability ``d``.  Noise flips vertex pairs,
keeping a flip only if it creates an induced P4 through the flipped pair.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Iterable, Iterator

import numpy as np
from numba import njit

from .errors import DomainError, NoValidFlip, RetryLimitExceeded
from .graph import Graph, distance
from .heuristic import VariantConfig, run_heuristic

RETRY_LIMIT = 1000

DEFAULT_N = (10, 20, 50, 100)
DEFAULT_DENSITY = (0.1, 0.2, 0.5)
DEFAULT_NOISE = (0.01, 0.05, 0.1, 0.2)
SKIP_CELLS = {(10, 0.01)}

COLUMNS = (
    "cell_id", "instance_id", "n", "density_intended", "density_actual", "noise_rate",
    "flips", "variant", "reps", "seed", "cost_heuristic", "cost_true", "dist_noisy_true",
    "dist_heur_true", "dist_rel", "normalized_dist_heur_true", "fit", "runtime_ms",
)


@dataclass(frozen=True)
class SimConfig:
    n: int
    density: float
    noise: float
    seed: int = 0
    retry_limit: int = RETRY_LIMIT

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("need at least one vertex")
        if not 0.0 <= self.density <= 1.0:
            raise DomainError(f"density {self.density} outside [0, 1]")
        if not 0.0 < self.noise < 1.0:
            raise DomainError(f"noise rate {self.noise} outside (0, 1)")
        if self.retry_limit < 1:
            raise DomainError("retry limit must be positive")


@dataclass(frozen=True)
class InstanceRecord:
    true_graph: Graph
    noisy: Graph
    seed: int
    density: float
    flips: int


def in_window(actual: float, d: float) -> bool:
    return abs(actual - d) <= 0.1 * d + 1e-12


def window_feasible(n: int, d: float) -> bool:
    """True if some edge count on ``n`` vertices has density inside the window."""
    pairs = comb(n, 2)
    if pairs == 0:
        return True
    lo = int(np.ceil((d - 0.1 * d) * pairs - 1e-9))
    return lo <= (d + 0.1 * d) * pairs + 1e-9


def _grow(n: int, d: float, rng) -> Graph:
    rows = [0] * n
    bins = [1 << v for v in range(n)]
    while len(bins) > 1:
        i, j = sorted(rng.choice(len(bins), size=2, replace=False))
        a, b = bins[i], bins[j]
        if rng.random() < d:
            for v in range(n):
                if (a >> v) & 1:
                    rows[v] |= b
                elif (b >> v) & 1:
                    rows[v] |= a
        bins[i] = a | b
        bins.pop(j)
    return Graph(n, tuple(rows))


def simulate_cograph(n: int, d: float, rng, retry_limit: int = RETRY_LIMIT) -> Graph:
    """Random cograph whose density is within 10% (relative) of ``d``."""
    if n < 1:
        raise DomainError("need at least one vertex")
    if not 0.0 <= d <= 1.0:
        raise DomainError(f"density {d} outside [0, 1]")
    for _ in range(retry_limit):
        g = _grow(n, d, rng)
        if n < 2 or in_window(g.density(), d):
            return g
    raise RetryLimitExceeded(f"no cograph with density near {d} in {retry_limit} draws")


@njit(cache=True)
def p4_through(adj, u, v):
    """True if some induced P4 of ``adj`` contains both ``u`` and ``v``."""
    n = adj.shape[0]
    for a in range(n):
        if a == u or a == v:
            continue
        for b in range(a + 1, n):
            if b == u or b == v:
                continue
            du = adj[u, v] + adj[u, a] + adj[u, b]
            dv = adj[v, u] + adj[v, a] + adj[v, b]
            da = adj[a, u] + adj[a, v] + adj[a, b]
            db = adj[b, u] + adj[b, v] + adj[b, a]
            if du + dv + da + db != 6:
                continue
            # three edges on four vertices form a P4 iff degrees are 1,1,2,2
            if max(max(du, dv), max(da, db)) == 2 and min(min(du, dv), min(da, db)) == 1:
                return True
    return False


def flip_count(n: int, r: float) -> int:
    """Number of flips for rate ``r``, rounded half up."""
    return int(np.floor(r * comb(n, 2) + 0.5))


def perturb(true_g: Graph, r: float, rng) -> Graph:
    """Flip ``round(r * C(n, 2))`` distinct pairs, each creating a new P4.

    Pairs are drawn uniformly from those never flipped; a rejected pair may
    be drawn again at a later step.  Raises :class:`NoValidFlip` when no
    remaining pair is valid.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"noise rate {r} outside (0, 1)")
    n = true_g.n
    adj = true_g.to_matrix()
    iu, iv = np.triu_indices(n, 1)
    pool = np.stack([iu, iv], axis=1)
    size = len(pool)
    for step in range(flip_count(n, r)):
        i = 0
        while True:
            if i == size:
                raise NoValidFlip(f"no valid flip left after {step} flips")
            j = int(rng.integers(i, size))
            pool[[i, j]] = pool[[j, i]]
            u, v = pool[i]
            adj[u, v] = adj[v, u] = 1 - adj[u, v]
            if p4_through(adj, u, v):
                break
            adj[u, v] = adj[v, u] = 1 - adj[u, v]
            i += 1
        size -= 1
        pool[[i, size]] = pool[[size, i]]
    return Graph.from_matrix(adj)


def relative_distance(dist_h: float, dist_n: float) -> float:
    if dist_n <= 0:
        raise DomainError("relative distance needs a noisy graph that differs from the truth")
    return dist_h / dist_n


def is_fit(cost_heuristic: float, cost_true: float) -> bool:
    return cost_heuristic <= cost_true


# -- experiments -----------------------------------------------------------

def instance_seed(master: int, cell: int, instance: int) -> int:
    return int(np.random.SeedSequence([master, cell, instance]).generate_state(1)[0])


def make_instance(cfg: SimConfig) -> InstanceRecord:
    """Simulate and perturb, re-simulating whenever no valid flip is left."""
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.retry_limit):
        g = simulate_cograph(cfg.n, cfg.density, rng, cfg.retry_limit)
        try:
            noisy = perturb(g, cfg.noise, rng)
        except NoValidFlip:
            continue
        return InstanceRecord(g, noisy, cfg.seed, g.density(), distance(g, noisy))
    raise RetryLimitExceeded(f"no perturbable instance in {cfg.retry_limit} attempts")


@dataclass(frozen=True)
class Cell:
    cell_id: int
    n: int
    density: float
    noise: float


def grid_cells(ns: Iterable[int] = DEFAULT_N, densities: Iterable[float] = DEFAULT_DENSITY,
               noises: Iterable[float] = DEFAULT_NOISE) -> list[Cell]:
    """Parameter cells in (n, density, noise) order.

    Cells with no flips, or whose density window holds no whole edge count,
    could never produce an instance and are skipped.
    """
    out = []
    for n, d, r in product(ns, densities, noises):
        if (n, r) in SKIP_CELLS or flip_count(n, r) == 0 or not window_feasible(n, d):
            continue
        out.append(Cell(len(out), n, d, r))
    return out


def _instance_rows(job) -> list[dict]:
    cell, inst, master, variants, reps, retry_limit = job
    seed = instance_seed(master, cell.cell_id, inst)
    rec = make_instance(SimConfig(cell.n, cell.density, cell.noise, seed, retry_limit))
    rows = []
    for variant in variants:
        cfg = VariantConfig(variant, repetitions=reps, seed=seed)
        t0 = time.perf_counter()
        res = run_heuristic(rec.noisy, cfg)
        ms = (time.perf_counter() - t0) * 1000.0
        cost_true = distance(rec.true_graph, rec.noisy)
        d_ht = distance(res.graph, rec.true_graph)
        rows.append({
            "cell_id": cell.cell_id,
            "instance_id": inst,
            "n": cell.n,
            "density_intended": cell.density,
            "density_actual": round(rec.density, 6),
            "noise_rate": cell.noise,
            "flips": rec.flips,
            "variant": variant,
            "reps": cfg.repetitions,
            "seed": seed,
            "cost_heuristic": res.cost,
            "cost_true": cost_true,
            "dist_noisy_true": cost_true,
            "dist_heur_true": d_ht,
            "dist_rel": round(relative_distance(d_ht, cost_true), 6),
            "normalized_dist_heur_true": round(d_ht / comb(cell.n, 2), 6),
            "fit": is_fit(res.cost, cost_true),
            "runtime_ms": round(ms, 3),
        })
    return rows


def run_experiment(cells: Iterable[Cell], variants: Iterable[str] = ("modify",), *,
                   instances: int = 100, reps: int | None = None, seed: int = 0,
                   jobs: int = 1, retry_limit: int = RETRY_LIMIT) -> Iterator[dict]:
    """One row per (cell, instance, variant), in that order.

    Every variant sees the same instances; instance seeds come from
    ``SeedSequence([seed, cell_id, instance])``.
    """
    variants = tuple(variants)
    for v in variants:
        VariantConfig(v)
    work = [(c, i, seed, variants, reps, retry_limit) for c in cells for i in range(instances)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            for rows in ex.map(_instance_rows, work):
                yield from rows
    else:
        for job in work:
            yield from _instance_rows(job)


def _cell_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def write_rows(rows: Iterable[dict], out) -> int:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    count = 0
    for row in rows:
        w.writerow([_cell_text(row[c]) for c in COLUMNS])
        count += 1
    return count


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()
