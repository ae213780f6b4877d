"""Command-line entry point.

Results go to stdout (JSON, graph text or CSV), logs to stderr.  Exit
status is 0 on success, 1 on domain errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cotree import build_cotree, find_induced_p4, to_term
from .errors import CographError, NotCograph
from .exact import DEFAULT_MAX_N, memory_estimate, solve_exact
from .graph import format_graph, read_graph, read_weights
from .heuristic import VARIANTS, VariantConfig, run_heuristic
from .report import render_report
from .simulate import (DEFAULT_DENSITY, DEFAULT_N, DEFAULT_NOISE, RETRY_LIMIT, grid_cells,
                       perturb, run_experiment, simulate_cograph, write_rows)

log = logging.getLogger("cographedit")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _edits(f) -> list[list[int]]:
    return [list(p) for p in sorted(f)]


def _write_text(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _list(kind):
    def parse(text):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}")
    return parse


def _variants(text):
    out = _list(str)(text)
    for v in out:
        if v not in VARIANTS:
            raise argparse.ArgumentTypeError(f"unknown variant {v!r}")
    return out


# -- subcommands -----------------------------------------------------------

def cmd_solve_exact(a) -> int:
    g = read_graph(a.graph)
    w = read_weights(a.weights, g.n) if a.weights else None
    if a.max_n > DEFAULT_MAX_N:
        log.warning("raising the size cap to %d: the table for n=%d needs about %.1f MiB",
                    a.max_n, g.n, memory_estimate(g.n, a.inner) / 2**20)
    sol = solve_exact(g, w, a.variant, inner=a.inner, threshold=a.threshold, max_n=a.max_n)
    out = {"cost": sol.cost, "edits": _edits(sol.edits),
           "cotree": to_term(sol.cotree) if sol.cotree else None}
    if a.inner == "bb":
        out["stats"] = {k: v for k, v in sol.stats.items() if k != "inner"}
        log.info("bb: %(expanded)d expanded, %(evaluated)d evaluated, %(pruned)d pruned, "
                 "%(screened)d screened", sol.stats)
    _emit(out)
    return 0


def cmd_solve_heuristic(a) -> int:
    g = read_graph(a.graph)
    cfg = VariantConfig(a.variant, a.reps, a.candidates, a.beam_width, a.seed)
    res = run_heuristic(g, cfg)
    _emit({"cost": res.cost, "edits": _edits(res.edits), "variant": cfg.variant,
           "reps": cfg.repetitions, "seed": cfg.seed,
           "cotree": to_term(res.cotree) if res.cotree else None})
    return 0


def cmd_recognize(a) -> int:
    g = read_graph(a.graph)
    p4 = find_induced_p4(g)
    if p4 is not None:
        _emit({"result": "not-cograph", "witness": list(p4)})
    elif g.n == 0:
        _emit({"result": "cograph", "cotree": None})
    else:
        _emit({"result": "cograph", "cotree": to_term(build_cotree(g))})
    return 0


def cmd_simulate(a) -> int:
    rng = np.random.default_rng(a.seed)
    g = simulate_cograph(a.n, a.density, rng, a.retry_limit)
    _write_text(format_graph(g), a.out)
    return 0


def cmd_perturb(a) -> int:
    g = read_graph(a.graph)
    p4 = find_induced_p4(g)
    if p4 is not None:
        raise NotCograph(p4)
    h = perturb(g, a.noise, np.random.default_rng(a.seed))
    _write_text(format_graph(h), a.out)
    return 0


def cmd_bench(a, parser) -> int:
    custom = {"--n": a.n, "--density": a.density, "--noise": a.noise}
    if a.grid == "default":
        given = [k for k, v in custom.items() if v is not None]
        if given:
            parser.error(f"{', '.join(given)} only apply with --grid custom")
        cells = grid_cells()
    else:
        missing = [k for k, v in custom.items() if v is None]
        if missing:
            parser.error(f"--grid custom needs {', '.join(missing)}")
        cells = grid_cells(a.n, a.density, a.noise)
    log.info("bench: %d cells x %d instances, variants %s", len(cells), a.instances,
             ",".join(a.variant))
    rows = run_experiment(cells, a.variant, instances=a.instances, reps=a.reps,
                          seed=a.seed, jobs=a.jobs)
    if a.out:
        with open(a.out, "w", newline="") as fh:
            count = write_rows(rows, fh)
    else:
        count = write_rows(rows, sys.stdout)
    log.info("bench: wrote %d rows", count)
    return 0


def cmd_report(a) -> int:
    out_dir = a.out_dir if a.out_dir is not None else Path(a.csv).parent
    table, plots = render_report(a.csv, out_dir)
    sys.stdout.write(table)
    for p in plots:
        log.info("wrote %s", p)
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cographedit", description="Cograph editing solvers.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-exact", help="exact editing by subset dynamic programming")
    s.add_argument("graph")
    s.add_argument("--weights", help="file of 'u v w' lines; unlisted pairs weigh 1")
    s.add_argument("--variant", choices=("editing", "deletion", "completion"), default="editing")
    s.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    s.add_argument("--inner", choices=("gray", "bb"), default="gray")
    s.add_argument("--threshold", type=int, default=4,
                   help="branch and bound enumerates once this few groups remain")
    s.set_defaults(run=cmd_solve_exact)

    s = sub.add_parser("solve-heuristic", help="incremental editing heuristic")
    s.add_argument("graph")
    s.add_argument("--variant", choices=VARIANTS, default="standard")
    s.add_argument("--reps", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--candidates", type=int, default=10)
    s.add_argument("--beam-width", type=int, default=10)
    s.set_defaults(run=cmd_solve_heuristic)

    s = sub.add_parser("recognize", help="cotree of a cograph or an induced P4")
    s.add_argument("graph")
    s.set_defaults(run=cmd_recognize)

    s = sub.add_parser("simulate", help="random cograph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--density", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--retry-limit", type=int, default=RETRY_LIMIT)
    s.add_argument("--out")
    s.set_defaults(run=cmd_simulate)

    s = sub.add_parser("perturb", help="add P4-creating noise to a cograph")
    s.add_argument("graph")
    s.add_argument("--noise", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(run=cmd_perturb)

    s = sub.add_parser("bench", help="simulate, perturb and solve over a parameter grid")
    s.add_argument("--grid", choices=("default", "custom"), default="default")
    s.add_argument("--n", type=_list(int), help=f"comma list, default grid {DEFAULT_N}")
    s.add_argument("--density", type=_list(float), help=f"default grid {DEFAULT_DENSITY}")
    s.add_argument("--noise", type=_list(float), help=f"default grid {DEFAULT_NOISE}")
    s.add_argument("--variant", type=_variants, default=["modify"],
                   help="comma list of heuristic variants")
    s.add_argument("--reps", type=int, default=None)
    s.add_argument("--instances", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(run=cmd_bench)

    s = sub.add_parser("report", help="summary table and SVG plots for a bench CSV")
    s.add_argument("csv")
    s.add_argument("--out-dir", help="plot directory (default: next to the CSV)")
    s.set_defaults(run=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s: %(message)s")
    try:
        if a.run is cmd_bench:
            return cmd_bench(a, parser)
        return a.run(a)
    except (CographError, OSError) as e:
        log.error("%s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
