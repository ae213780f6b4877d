"""Summaries and plots for benchmark CSV files."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import numpy as np

from .errors import DomainError
from .simulate import COLUMNS

PLOT_FILES = ("fit_rate.svg", "dist_rel.svg", "runtime.svg")


class SchemaError(DomainError):
    pass


def read_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header is None or tuple(header) != COLUMNS:
            raise SchemaError(f"{path}: header does not match the benchmark schema")
        rows = []
        for lineno, rec in enumerate(r, start=2):
            if len(rec) != len(COLUMNS):
                raise SchemaError(f"{path}:{lineno}: expected {len(COLUMNS)} fields")
            row = dict(zip(COLUMNS, rec))
            try:
                rows.append({
                    "cell_id": int(row["cell_id"]),
                    "n": int(row["n"]),
                    "density": float(row["density_intended"]),
                    "noise": float(row["noise_rate"]),
                    "variant": row["variant"],
                    "fit": {"true": True, "false": False}[row["fit"]],
                    "dist_rel": float(row["dist_rel"]),
                    "runtime_ms": float(row["runtime_ms"]),
                })
            except (KeyError, ValueError) as e:
                raise SchemaError(f"{path}:{lineno}: bad value ({e})") from None
    return rows


def summarize(rows: list[dict]) -> list[dict]:
    """One summary per (cell, variant), in order of first appearance."""
    groups = defaultdict(list)
    for row in rows:
        groups[(row["cell_id"], row["n"], row["density"], row["noise"], row["variant"])].append(row)
    out = []
    for (cell, n, d, r, v), rs in groups.items():
        dr = np.array([x["dist_rel"] for x in rs])
        q1, med, q3 = np.quantile(dr, [0.25, 0.5, 0.75])
        out.append({
            "cell_id": cell, "n": n, "density": d, "noise": r, "variant": v,
            "count": len(rs),
            "fit": float(np.mean([x["fit"] for x in rs])),
            "q1": float(q1), "median": float(med), "q3": float(q3),
            "runtime_ms": float(np.mean([x["runtime_ms"] for x in rs])),
        })
    return out


def format_table(summary: list[dict]) -> str:
    head = f"{'cell':>4} {'n':>4} {'d':>5} {'r':>5} {'variant':<15} {'count':>5} {'fit':>6} " \
           f"{'q1':>6} {'median':>6} {'q3':>6} {'ms':>10}"
    lines = [head]
    for s in summary:
        lines.append(
            f"{s['cell_id']:>4} {s['n']:>4} {s['density']:>5.2f} {s['noise']:>5.2f} "
            f"{s['variant']:<15} {s['count']:>5} {s['fit']:>6.3f} {s['q1']:>6.3f} "
            f"{s['median']:>6.3f} {s['q3']:>6.3f} {s['runtime_ms']:>10.2f}")
    return "\n".join(lines) + "\n"


def _label(s) -> str:
    return f"n{s['n']} d{s['density']:g} r{s['noise']:g}"


def _plots(rows, summary, out_dir: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed ids and no timestamp keep the SVG bytes reproducible
    plt.rcParams["svg.hashsalt"] = "cographedit"
    meta = {"Date": None}
    variants = list(dict.fromkeys(s["variant"] for s in summary))
    cells = list(dict.fromkeys((s["cell_id"], _label(s)) for s in summary))
    paths = []

    fig, ax = plt.subplots(figsize=(max(6, len(cells) * 0.6), 4))
    width = 0.8 / len(variants)
    for k, v in enumerate(variants):
        fit = {s["cell_id"]: s["fit"] for s in summary if s["variant"] == v}
        xs = [i + k * width for i, (c, _) in enumerate(cells) if c in fit]
        ax.bar(xs, [fit[c] for c, _ in cells if c in fit], width, label=v)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(cells))])
    ax.set_xticklabels([lab for _, lab in cells], rotation=90, fontsize=7)
    ax.set_ylabel("fit fraction")
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=7)
    fig.tight_layout()
    paths.append(out_dir / PLOT_FILES[0])
    fig.savefig(paths[-1], metadata=meta)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(max(6, len(summary) * 0.4), 4))
    data = defaultdict(list)
    for row in rows:
        data[(row["cell_id"], row["variant"])].append(row["dist_rel"])
    keys = [(s["cell_id"], s["variant"]) for s in summary]
    ax.boxplot([data[k] for k in keys])
    ax.set_xticks(range(1, len(keys) + 1))
    ax.set_xticklabels([f"{_label(s)} {s['variant']}" for s in summary], rotation=90, fontsize=6)
    ax.set_ylabel("dist_rel")
    fig.tight_layout()
    paths.append(out_dir / PLOT_FILES[1])
    fig.savefig(paths[-1], metadata=meta)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    for v in variants:
        by_n = defaultdict(list)
        for row in rows:
            if row["variant"] == v:
                by_n[row["n"]].append(row["runtime_ms"] / 1000.0)
        ns = sorted(by_n)
        ax.plot(ns, [np.mean(by_n[n]) for n in ns], marker="o", label=v)
    ax.set_xlabel("n")
    ax.set_ylabel("mean runtime (s)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    paths.append(out_dir / PLOT_FILES[2])
    fig.savefig(paths[-1], metadata=meta)
    plt.close(fig)
    return paths


def render_report(csv_path, out_dir=None) -> tuple[str, list[Path]]:
    """Text summary of a benchmark CSV plus SVG plots written to ``out_dir``.

    A header-only file gives an empty table and no plots.
    """
    rows = read_rows(csv_path)
    summary = summarize(rows)
    table = format_table(summary)
    if not rows or out_dir is None:
        return table, []
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return table, _plots(rows, summary, out_dir)
