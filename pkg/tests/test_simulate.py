import csv
import io
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cographedit.cotree import build_cotree, cotree_to_graph
from cographedit.errors import DomainError, NoValidFlip, RetryLimitExceeded
from cographedit.graph import Graph, distance, induced_subgraph, mask_of
from cographedit.heuristic import VariantConfig, run_heuristic
from cographedit.simulate import (COLUMNS, Cell, SimConfig, _grow, flip_count, grid_cells,
                                  in_window, instance_seed, window_feasible, is_fit, make_instance, p4_through,
                                  perturb, relative_distance, rows_to_csv, run_experiment,
                                  simulate_cograph)
from oracles import has_p4


def rng(seed=0):
    return np.random.default_rng(seed)


def test_extreme_densities():
    assert simulate_cograph(12, 0.0, rng()) == Graph.empty(12)
    assert simulate_cograph(12, 1.0, rng()) == Graph.complete(12)
    assert simulate_cograph(1, 0.3, rng()) == Graph.empty(1)


def test_bad_simulation_arguments():
    with pytest.raises(DomainError):
        simulate_cograph(0, 0.5, rng())
    with pytest.raises(DomainError):
        simulate_cograph(5, 1.5, rng())
    with pytest.raises(RetryLimitExceeded):
        # two vertices give density 0 or 1, never 0.5
        simulate_cograph(2, 0.5, rng(), retry_limit=20)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 30), st.sampled_from([0.1, 0.2, 0.5, 0.8]), st.integers(0, 2**32 - 1))
def test_simulated_graphs_are_cographs_in_window(n, d, seed):
    try:
        g = simulate_cograph(n, d, rng(seed), retry_limit=300)
    except RetryLimitExceeded:
        return
    assert in_window(g.density(), d)
    assert not has_p4(g)
    assert cotree_to_graph(build_cotree(g), n) == g


def test_window_is_relative():
    assert in_window(0.18, 0.2) and in_window(0.22, 0.2)
    assert not in_window(0.17, 0.2) and not in_window(0.25, 0.2)


@pytest.mark.parametrize("d", [0.1, 0.2, 0.5])
def test_unfiltered_mean_density(d):
    r = rng(42)
    mean = np.mean([_grow(50, d, r).density() for _ in range(1000)])
    assert abs(mean - d) <= 0.15


def test_p4_through_examples():
    two_k2 = Graph.from_edges(4, [(0, 1), (2, 3)]).to_matrix()
    assert not p4_through(two_k2, 1, 2)
    two_k2[1, 2] = two_k2[2, 1] = 1
    assert p4_through(two_k2, 1, 2)
    paw = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)]).to_matrix()
    assert not p4_through(paw, 0, 3)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))))
def test_p4_through_matches_brute_force(case):
    n, bits = case
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    g = Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])
    adj = g.to_matrix()
    for u, v in pairs:
        hit = any(has_p4(induced_subgraph(g, mask_of((u, v, a, b))))
                  for a, b in combinations(range(n), 2) if not {a, b} & {u, v})
        assert p4_through(adj, u, v) == hit


def test_flip_count_rounds_half_up():
    assert flip_count(20, 0.05) == 10
    assert flip_count(10, 0.01) == 0
    assert flip_count(10, 0.05) == 2  # 2.25
    assert flip_count(5, 0.05) == 1  # 0.5 rounds up


def test_perturb_flips_exactly_k_new_p4_pairs():
    r = rng(3)
    for _ in range(30):
        g = simulate_cograph(20, 0.2, r)
        try:
            noisy = perturb(g, 0.05, r)
        except NoValidFlip:
            continue
        assert distance(g, noisy) == flip_count(20, 0.05)
        assert has_p4(noisy)


def test_perturb_no_valid_flip():
    # every flip of K2 plus an isolated vertex stays P4-free
    with pytest.raises(NoValidFlip):
        perturb(Graph.from_edges(3, [(0, 1)]), 0.5, rng())
    with pytest.raises(DomainError):
        perturb(Graph.empty(4), 1.0, rng())


def test_relative_distance_and_fit_examples():
    assert relative_distance(0, 4) == 0.0
    assert relative_distance(4, 4) == 1.0
    assert relative_distance(2, 4) == 0.5
    with pytest.raises(DomainError):
        relative_distance(1, 0)
    assert is_fit(3, 5) and is_fit(5, 5) and not is_fit(6, 5)


def test_sim_config_validation():
    with pytest.raises(DomainError):
        SimConfig(10, 0.2, 0.0)
    with pytest.raises(DomainError):
        SimConfig(0, 0.2, 0.1)
    with pytest.raises(DomainError):
        SimConfig(10, 0.2, 0.1, retry_limit=0)


def test_make_instance_is_seeded():
    a = make_instance(SimConfig(20, 0.2, 0.05, seed=11))
    b = make_instance(SimConfig(20, 0.2, 0.05, seed=11))
    assert a == b
    assert not has_p4(a.true_graph) and a.flips == 10
    assert instance_seed(0, 1, 2) == instance_seed(0, 1, 2) != instance_seed(0, 2, 1)


def test_default_grid():
    cells = grid_cells()
    # n=10 drops r=0.01 and d=0.1 (4.05..4.95 edges needed)
    assert len(cells) == 42
    assert all(not (c.n == 10 and (c.noise == 0.01 or c.density == 0.1)) for c in cells)
    assert [c.cell_id for c in cells] == list(range(42))


def test_window_feasible():
    assert not window_feasible(10, 0.1)
    assert window_feasible(10, 0.2) and window_feasible(20, 0.1)
    assert window_feasible(1, 0.3) and window_feasible(10, 0.0)


def test_experiment_rows():
    cells = [Cell(0, 12, 0.5, 0.1), Cell(1, 10, 0.2, 0.05)]
    rows = list(run_experiment(cells, ("standard", "modify"), instances=3, reps=4, seed=5))
    assert len(rows) == 12
    for c in cells:
        for v in ("standard", "modify"):
            assert sum(r["cell_id"] == c.cell_id and r["variant"] == v for r in rows) == 3
    for r in rows:
        assert r["dist_heur_true"] <= r["dist_noisy_true"] + r["cost_heuristic"]
        assert r["fit"] == (r["cost_heuristic"] <= r["cost_true"])
        assert r["reps"] == 4


def test_experiment_is_deterministic():
    cells = grid_cells([10, 20], [0.2], [0.05])
    a = list(run_experiment(cells, instances=4, reps=3, seed=7))
    b = list(run_experiment(cells, instances=4, reps=3, seed=7, jobs=2))
    strip = [{k: v for k, v in r.items() if k != "runtime_ms"} for r in a]
    assert strip == [{k: v for k, v in r.items() if k != "runtime_ms"} for r in b]


def test_csv_layout():
    text = rows_to_csv(run_experiment([Cell(0, 10, 0.5, 0.1)], instances=2, reps=2))
    recs = list(csv.reader(io.StringIO(text)))
    assert tuple(recs[0]) == COLUMNS and len(recs) == 3
    assert recs[1][COLUMNS.index("fit")] in ("true", "false")
    assert "\r" not in text


def test_heuristic_outputs_are_cographs():
    for inst in range(5):
        rec = make_instance(SimConfig(15, 0.2, 0.1, seed=instance_seed(0, 0, inst)))
        assert rec.density == rec.true_graph.density()
        res = run_heuristic(rec.noisy, VariantConfig("modify", repetitions=5), seed=inst)
        assert not has_p4(res.graph)
