"""Figure rendering from experiment output files.

Every figure is built purely from the CSV rows and summary JSON written by
the simulation package: aggregate statistics and analytic reference values
are read from the summary JSON, never recomputed here.  Rendering is
deterministic given the inputs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
# deterministic element ids in svg output
matplotlib.rcParams["svg.hashsalt"] = "walkplots"

import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("coverage-vs-n", "arcs-vs-n", "cycle-histogram", "tree-escape",
         "grid-tour-trend")


class FigureError(Exception):
    pass


class SchemaMismatchError(FigureError):
    pass


class MissingInputError(FigureError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_paths: tuple = ()
    summary_paths: tuple = ()
    out_path: str = "figure.png"
    bins: int = 20

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")


def _load_summary(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise MissingInputError(f"summary file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaMismatchError(f"summary {path} is not valid JSON") from exc


def _load_rows(path) -> list:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
            columns = reader.fieldnames
    except FileNotFoundError as exc:
        raise MissingInputError(f"csv file not found: {path}") from exc
    if not columns or not rows:
        raise SchemaMismatchError(f"csv {path} is empty")
    return rows


def _need(mapping: dict, key: str, where: str):
    cur = mapping
    for part in key.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise SchemaMismatchError(f"{where} lacks key {key!r}")
        cur = cur[part]
    return cur


def render(spec: FigureSpec) -> dict:
    """Write the figure and return the overlay/reference values used (all
    taken verbatim from the summary JSON inputs)."""
    handler = _HANDLERS[spec.kind]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        overlays = handler(spec, ax)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        if str(spec.out_path).endswith(".svg"):
            fig.savefig(spec.out_path, metadata={"Date": None})
        else:
            fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return overlays


def _batch_points(spec, metric):
    """(n, mean, ci_low, ci_high) per summary, sorted by n."""
    if not spec.summary_paths:
        raise MissingInputError("this figure kind needs --summary inputs")
    points = []
    for path in spec.summary_paths:
        summary = _load_summary(path)
        n = _need(summary, "n", path)
        agg = _need(summary, f"aggregates.{metric}", path)
        points.append((n, agg["mean"], agg["ci99_low"], agg["ci99_high"],
                       summary))
    points.sort(key=lambda t: t[0])
    return points


def _coverage_vs_n(spec, ax):
    points = _batch_points(spec, "unique_vertices")
    ns = [p[0] for p in points]
    means = [p[1] for p in points]
    err = [[m - lo for _, m, lo, _, _ in points],
           [hi - m for _, m, _, hi, _ in points]]
    ax.errorbar(ns, means, yerr=err, marker="o", capsize=3,
                label="mean distinct vertices (99% CI)")
    refs = [_need(p[4], "reference.coverage_lower_bound",
                  "coverage summary") for p in points]
    ax.plot(ns, refs, "--", color="tab:red", label="(1 - 1/e) n")
    exacts = [_need(p[4], "reference.occupancy_exact", "coverage summary")
              for p in points]
    ax.plot(ns, exacts, ":", color="tab:green", label="occupancy exact")
    ax.set_xlabel("n")
    ax.set_ylabel("distinct vertices in first n-1 steps")
    ax.set_title("Coverage of the complete graph")
    ax.legend()
    return {"coverage_lower_bound": refs, "occupancy_exact": exacts}


def _arcs_vs_n(spec, ax):
    points = _batch_points(spec, "steps")
    ns = [p[0] for p in points]
    means = [p[1] for p in points]
    err = [[m - lo for _, m, lo, _, _ in points],
           [hi - m for _, m, _, hi, _ in points]]
    ax.errorbar(ns, means, yerr=err, marker="o", capsize=3,
                label="mean arcs before repeat (99% CI)")
    conj = [_need(p[4], "reference.conjectured_arcs", "arcs summary")
            for p in points]
    ax.plot(ns, conj, "--", color="tab:red", label="1.8 n")
    exacts = [_need(p[4], "reference.repeat_process_exact", "arcs summary")
              for p in points]
    ax.plot(ns, exacts, ":", color="tab:green", label="repeat process exact")
    ax.set_xlabel("n")
    ax.set_ylabel("arcs traversed before first repeat")
    ax.set_title("Arcs to cycle on the complete graph")
    ax.legend()
    return {"conjectured_arcs": conj, "repeat_process_exact": exacts}


def _cycle_histogram(spec, ax):
    if not spec.csv_paths:
        raise MissingInputError("cycle-histogram needs --in CSV input")
    periods = []
    for path in spec.csv_paths:
        for row in _load_rows(path):
            if "period" not in row:
                raise SchemaMismatchError(f"csv {path} lacks period column")
            if row["outcome"] == "cycled" and row["period"]:
                periods.append(int(row["period"]))
    if not periods:
        raise SchemaMismatchError("no cycled trials in input CSV")
    ax.hist(periods, bins=spec.bins, color="tab:blue", edgecolor="black")
    ax.set_xlabel("cycle period (states)")
    ax.set_ylabel("trials")
    ax.set_title("Cycle period distribution")
    return {"trials": len(periods), "bins": spec.bins}


def _tree_escape(spec, ax):
    if not spec.summary_paths:
        raise MissingInputError("tree-escape needs --summary inputs")
    rows = []
    for path in spec.summary_paths:
        s = _load_summary(path)
        rows.append((_need(s, "depth_cap", path),
                     _need(s, "empirical_frequency", path),
                     _need(s, "ci99_half_width", path),
                     _need(s, "exact_truncated_product_float", path),
                     _need(s, "e_minus_2", path)))
    rows.sort(key=lambda t: t[0])
    depths = [r[0] for r in rows]
    ax.errorbar(depths, [r[1] for r in rows], yerr=[r[2] for r in rows],
                marker="o", capsize=3, label="empirical escape frequency")
    ax.plot(depths, [r[3] for r in rows], "--", color="tab:green",
            label="exact truncated product")
    ax.axhline(rows[0][4], color="tab:red", linestyle=":",
               label="e^-2 lower bound")
    ax.set_xlabel("depth")
    ax.set_ylabel("probability of monotone escape")
    ax.set_title("Escape on the growing tree")
    ax.legend()
    return {"exact_truncated_product_float": [r[3] for r in rows],
            "e_minus_2": rows[0][4]}


def _grid_tour_trend(spec, ax):
    if not spec.summary_paths:
        raise MissingInputError("grid-tour-trend needs --summary input")
    summary = _load_summary(spec.summary_paths[0])
    table = _need(summary, "table", spec.summary_paths[0])
    if not table:
        raise SchemaMismatchError("grid-tours table is empty")
    import math
    cols = [row["cols"] for row in table]
    maxes = [row["max_unique_vertices"] for row in table]
    means = [row["mean_unique_vertices"] for row in table]
    ax.plot(cols, maxes, "o-", label="max tour")
    ax.plot(cols, means, "s-", label="mean tour")
    slope = _need(summary, "log_fit.slope", spec.summary_paths[0])
    intercept = _need(summary, "log_fit.intercept", spec.summary_paths[0])
    fit = [slope * math.log(c) + intercept for c in cols]
    ax.plot(cols, fit, "--", color="tab:red",
            label=f"fit {slope:.2f} log n + {intercept:.2f}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("grid width n")
    ax.set_ylabel("distinct vertices per walk")
    ax.set_title("Longest tours on grids")
    ax.legend()
    return {"slope": slope, "intercept": intercept}


_HANDLERS = {
    "coverage-vs-n": _coverage_vs_n,
    "arcs-vs-n": _arcs_vs_n,
    "cycle-histogram": _cycle_histogram,
    "tree-escape": _tree_escape,
    "grid-tour-trend": _grid_tour_trend,
}
