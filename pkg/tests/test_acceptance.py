"""End-to-end acceptance checks, one per criterion.

Each check prints a single PASS/FAIL line.  Run with ``pytest -s`` or
directly as a script to see the lines together.
"""

import csv
import io
import subprocess
import sys
import time
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from cographedit.cotree import build_cotree, cotree_to_graph
from cographedit.errors import RetryLimitExceeded
from cographedit.exact import backtrace, gray_trace, par_cost, ser_cost, solve_exact, solve_table
from cographedit.branch_bound import solve_subset_bb
from cographedit.graph import WeightMatrix, apply_edits, popcount
from cographedit.heuristic import VARIANTS, VariantConfig, run_heuristic
from cographedit.simulate import (Cell, SimConfig, instance_seed, make_instance, run_experiment,
                                  simulate_cograph)
from oracles import brute_force_cost, has_p4, random_graph

VARIANTS_EXACT = ("editing", "deletion", "completion")


def _report(num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, flush=True)
    return ok


def _modify_rows(n, d, r, instances, seed, cell_id=0):
    return list(run_experiment([Cell(cell_id, n, d, r)], ("modify",), instances=instances,
                               reps=100, seed=seed))


def check_1():
    rng = np.random.default_rng(101)
    bad = 0
    for _ in range(200):
        g = random_graph(rng, int(rng.integers(4, 8)))
        for variant in VARIANTS_EXACT:
            want = brute_force_cost(g, variant)
            for inner in ("gray", "bb"):
                bad += solve_exact(g, variant=variant, inner=inner).cost != want
    return bad == 0, f"{bad} mismatches over 200 graphs x 3 variants x 2 engines"


def check_2():
    rng = np.random.default_rng(202)
    same, fewer = 0, 0
    for _ in range(50):
        g = random_graph(rng, 14, 0.5)
        a = solve_exact(g, inner="gray")
        b = solve_exact(g, inner="bb")
        same += a.cost == b.cost
        fewer += b.stats["evaluated"] <= a.stats["evaluated"]
    ok = same == 50 and fewer >= 45
    return ok, f"costs equal on {same}/50, bb evaluates no more than gray on {fewer}/50"


def check_3():
    rng = np.random.default_rng(303)
    steps = bad = 0
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        g = random_graph(rng, n)
        w = WeightMatrix.from_triples(n, [(u, v, float(rng.integers(0, 10)))
                                          for u, v in combinations(range(n), 2)])
        x = 0
        while popcount(x) < 2:
            x = int(rng.integers(1, 1 << n))
        for y, _, par, ser in gray_trace(g, w, x):
            steps += 1
            bad += par != par_cost(g, w, y, x ^ y) or ser != ser_cost(g, w, y, x ^ y)
    return bad == 0, f"{bad} mismatches over {steps} enumeration steps"


def check_4():
    rng = np.random.default_rng(404)
    solve_exact(random_graph(rng, 8))
    med = {}
    for n in range(16, 21):
        times = []
        for _ in range(5):
            g = random_graph(rng, n, 0.5)
            t0 = time.perf_counter()
            solve_exact(g)
            times.append(time.perf_counter() - t0)
        med[n] = float(np.median(times))
    ratios = {n: med[n + 1] / med[n] for n in range(16, 20)}
    ok = all(2.4 <= q <= 3.8 for q in ratios.values())
    text = ", ".join(f"{n}->{n + 1}: {q:.2f}" for n, q in ratios.items())
    return ok, f"ratios {text}"


def check_5():
    rng = np.random.default_rng(505)
    checks = bad = 0

    def scan(h):
        nonlocal checks, bad
        checks += 1
        bad += has_p4(h)

    for _ in range(1500):
        g = random_graph(rng, int(rng.integers(1, 11)))
        variant = VARIANTS_EXACT[int(rng.integers(3))]
        for inner in ("gray", "bb"):
            sol = solve_exact(g, variant=variant, inner=inner)
            scan(apply_edits(g, sol.edits))
    for _ in range(1500):
        g = random_graph(rng, int(rng.integers(4, 10)))
        t = solve_table(g)
        x = (1 << g.n) - 1
        r = solve_subset_bb(g, None, x, t.f)
        t.choice[x] = r.y
        t.kind[x] = 0 if r.kind == "parallel" else 1
        edits, _ = backtrace(g, t)
        scan(apply_edits(g, edits))
    for i in range(3000):
        g = random_graph(rng, int(rng.integers(1, 41)), float(rng.uniform(0.1, 0.9)))
        variant = VARIANTS[i % len(VARIANTS)]
        scan(run_heuristic(g, VariantConfig(variant, repetitions=2), seed=i).graph)
    for _ in range(3000):
        try:
            scan(simulate_cograph(int(rng.integers(1, 51)), float(rng.choice([0.1, 0.2, 0.5])),
                                  rng))
        except RetryLimitExceeded:
            pass
    ok = bad == 0 and checks >= 10_000
    return ok, f"{bad} graphs with an induced P4 in {checks} scans"


def check_6():
    rng = np.random.default_rng(606)
    done = bad = 0
    while done < 1000:
        n = int(rng.integers(5, 51))
        d = float(rng.choice([0.1, 0.2, 0.5]))
        try:
            g = simulate_cograph(n, d, rng)
        except RetryLimitExceeded:
            continue
        done += 1
        bad += cotree_to_graph(build_cotree(g), n) != g
    return bad == 0, f"{bad} roundtrip failures on {done} simulated cographs"


def check_7():
    rows = _modify_rows(20, 0.2, 0.05, 100, seed=7)
    fit = np.mean([r["fit"] for r in rows])
    return fit >= 0.90, f"fit fraction {fit:.2f} at n=20 d=0.2 r=0.05 (need >= 0.90)"


def check_8():
    rows = _modify_rows(50, 0.2, 0.01, 100, seed=8)
    fit = np.mean([r["fit"] for r in rows])
    return fit >= 0.90, f"fit fraction {fit:.2f} at n=50 d=0.2 r=0.01 (need >= 0.90)"


def check_9():
    target = {0.1: 0.54, 0.2: 0.34, 0.5: 0.27}
    pooled, means = [], {}
    for k, d in enumerate(target):
        vals = [r["dist_rel"] for r in _modify_rows(20, d, 0.01, 100, seed=9, cell_id=k)]
        pooled.extend(vals)
        means[d] = float(np.mean(vals))
    med = float(np.median(pooled))
    zero = float(np.mean(np.array(pooled) == 0))
    ok = med <= 0.25 and zero >= 0.40 and all(abs(means[d] - target[d]) <= 0.25 for d in target)
    text = ", ".join(f"d={d}: {m:.3f}" for d, m in means.items())
    return ok, f"median {med:.3f}, exact-0 fraction {zero:.2f}, means {text}"


def check_10():
    worst = 0.0
    for inst in range(3):
        rec = make_instance(SimConfig(100, 0.2, 0.05, seed=instance_seed(10, 0, inst)))
        t0 = time.perf_counter()
        run_heuristic(rec.noisy, VariantConfig("modify", repetitions=100), seed=inst)
        worst = max(worst, time.perf_counter() - t0)
    return worst < 120, f"slowest of 3 instances {worst:.2f} s (limit 120 s)"


def _cli(*argv, cwd):
    r = subprocess.run([sys.executable, "-m", "cographedit", *argv], cwd=cwd,
                       capture_output=True, check=True)
    return r.stdout


def _strip_runtime(text: bytes) -> list:
    recs = list(csv.reader(io.StringIO(text.decode())))
    k = recs[0].index("runtime_ms")
    return [r[:k] + r[k + 1:] for r in recs]


def check_11(tmp):
    tmp = Path(tmp)
    g = tmp / "g.txt"
    g.write_text(_cli("simulate", "--n", "14", "--density", "0.5", "--seed", "3", cwd=tmp).decode())
    noisy = tmp / "noisy.txt"
    noisy.write_text(_cli("perturb", str(g), "--noise", "0.1", "--seed", "4", cwd=tmp).decode())
    cmds = {
        "simulate": ["simulate", "--n", "30", "--density", "0.2", "--seed", "7"],
        "perturb": ["perturb", str(g), "--noise", "0.1", "--seed", "7"],
        "recognize": ["recognize", str(noisy)],
        "solve-exact gray": ["solve-exact", str(noisy)],
        "solve-exact bb": ["solve-exact", "--inner", "bb", str(noisy)],
        "solve-heuristic": ["solve-heuristic", "--variant", "beam-search", "--seed", "7", str(noisy)],
    }
    differ = [name for name, argv in cmds.items() if _cli(*argv, cwd=tmp) != _cli(*argv, cwd=tmp)]
    bench = ["bench", "--grid", "default", "--seed", "7", "--instances", "2", "--reps", "5",
             "--jobs", "1"]
    b1 = _cli(*bench, cwd=tmp)
    b2 = _cli(*bench, cwd=tmp)
    if _strip_runtime(b1) != _strip_runtime(b2):
        differ.append("bench")
    (tmp / "b.csv").write_bytes(b1)
    outs = []
    for k in range(2):
        table = _cli("report", str(tmp / "b.csv"), "--out-dir", str(tmp / f"r{k}"), cwd=tmp)
        outs.append([table] + [p.read_bytes() for p in sorted((tmp / f"r{k}").iterdir())])
    if outs[0] != outs[1]:
        differ.append("report")
    n = len(cmds) + 2
    return not differ, f"{n - len(differ)}/{n} subcommand runs byte-identical" + \
        (f", differing: {', '.join(differ)}" if differ else "")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9,
          check_10, check_11]


@pytest.mark.parametrize("num", range(1, 12))
def test_criterion(num, capsys, tmp_path):
    fn = CHECKS[num - 1]
    ok, detail = fn(tmp_path) if num == 11 else fn()
    with capsys.disabled():
        print()
        _report(num, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    results = []
    for num, fn in enumerate(CHECKS, start=1):
        if num == 11:
            with tempfile.TemporaryDirectory() as d:
                ok, detail = fn(d)
        else:
            ok, detail = fn()
        results.append(_report(num, ok, detail))
    sys.exit(0 if all(results) else 1)
