"""Command-line entry point.

Subcommands are thin adapters over the library: `walk` runs one basic
walk, `experiment` runs a named preset batch, `bound` prints exact trap
probabilities and shell bounds, `graph check` validates adjacency files.
Config may come from a JSON file (--config); explicit flags override file
values.  Every randomized run requires an explicit --seed.  Exit codes:
0 success, 1 usage/config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import experiments as ex
from .graphs import (Complete, GraphError, Grid, GrowingTree, HexLattice,
                     LatticeZ, Star, load_explicit)
from .labelings import (LabelingError, SCHEMES, load_fixture_table,
                        make_labeling)
from .rng import RandomStream
from .traps import (HexSpire, LatticeTrap, StarTrap, StraightPath, TrapError,
                    analytic_trap_probability, shell_bounds)
from .walker import WalkError, run_basic_walk

PRESETS = ("z2-cycling", "zd-cycling", "hex-cycling", "kn-coverage",
           "kn-arcs", "tree-escape", "occupancy", "zprocess",
           "trap-frequency", "grid-tours")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_graph_spec(spec: str):
    spec = spec.strip()
    if spec == "hex":
        return HexLattice()
    if spec == "tree":
        return GrowingTree()
    if spec.startswith("z") and spec[1:].isdigit():
        return LatticeZ(int(spec[1:]))
    if spec.startswith("k") and spec[1:].isdigit():
        return Complete(int(spec[1:]))
    if spec.startswith("complete:"):
        return Complete(int(spec.split(":", 1)[1]))
    if spec.startswith("star:"):
        return Star(int(spec.split(":", 1)[1]))
    if spec.startswith("grid:"):
        dims = spec.split(":", 1)[1].lower().split("x")
        if len(dims) != 2:
            raise UsageError(f"grid spec must be grid:KxN, got {spec!r}")
        return Grid(int(dims[0]), int(dims[1]))
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        with open(path) as fh:
            return load_explicit(fh.read())
    raise UsageError(f"unknown graph spec {spec!r}")


def parse_labeling_spec(spec: str):
    spec = spec.strip()
    if spec in ("lazy", "full") or spec in SCHEMES:
        return spec
    if spec.startswith("fixture:"):
        path = spec.split(":", 1)[1]
        with open(path) as fh:
            return load_fixture_table(fh.read())
    raise UsageError(f"unknown labeling spec {spec!r}")


def parse_vertex(text: str, graph):
    if text == "origin":
        return graph.origin()
    if "," in text or text.startswith("("):
        parts = text.strip("()").replace(",", " ").split()
        return tuple(int(p) for p in parts)
    return int(text)


def _require_seed(args):
    if args.seed is None:
        raise UsageError("randomized runs require an explicit --seed")
    return args.seed


def _workers(args):
    if getattr(args, "workers", None) is not None:
        return args.workers
    env = os.environ.get("BASICWALK_WORKERS")
    return int(env) if env else None


def _fmt_fraction(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x)


# ---------------------------------------------------------------------------


def cmd_walk(args) -> int:
    graph = parse_graph_spec(args.graph)
    mode = parse_labeling_spec(args.labeling)
    start = parse_vertex(args.start, graph) if args.start else graph.origin()
    stream = None
    if mode in ("lazy", "full"):
        stream = RandomStream(_require_seed(args))
    labeling = make_labeling(graph, mode, stream)
    out = run_basic_walk(graph, labeling, start=start, init_port=args.port,
                         budget=args.budget, stream=stream,
                         trace_path=args.trace)
    summary = {
        "command": "walk",
        "config": {"graph": args.graph, "labeling": args.labeling,
                   "start": str(start), "port": args.port,
                   "budget": args.budget, "seed": args.seed,
                   "trace": args.trace},
        "outcome": out.classification,
        "tail": out.tail, "period": out.period,
        "steps": out.steps_taken,
        "unique_vertices": out.unique_vertices,
        "unique_states": out.unique_states,
        "max_distance": out.max_distance,
        "monotone_escape": out.monotone_escape,
    }
    if args.out:
        ex.write_summary_json(args.out, summary)
    print(f"walk {graph.name}: {out.classification} tail={out.tail} "
          f"period={out.period} steps={out.steps_taken} "
          f"unique_vertices={out.unique_vertices} "
          f"max_distance={out.max_distance}")
    return 0


# ---------------------------------------------------------------------------


def _batch_summary(result: ex.ExperimentResult, extra: dict) -> dict:
    spec = result.spec
    summary = {
        "config": {
            "graph": spec.graph.name,
            "labeling_mode": str(spec.labeling_mode),
            "start_policy": spec.start_policy,
            "init_port_policy": spec.init_port_policy,
            "trials": spec.trials,
            "budget": spec.budget,
            "master_seed": spec.master_seed,
        },
        "aggregates": result.aggregates(),
    }
    summary.update(extra)
    return summary


def run_preset(args) -> dict:
    preset = args.preset
    seed = _require_seed(args)
    workers = _workers(args)
    trials = args.trials

    if preset in ("z2-cycling", "zd-cycling", "hex-cycling"):
        if preset == "z2-cycling":
            graph = LatticeZ(2)
        elif preset == "zd-cycling":
            if args.dim is None:
                raise UsageError("zd-cycling requires --dim")
            graph = LatticeZ(args.dim)
        else:
            graph = HexLattice()
        spec = ex.ExperimentSpec(graph=graph, labeling_mode="lazy",
                                 trials=trials or 10**4,
                                 budget=args.budget or 10**7,
                                 master_seed=seed)
        result = ex.mc_cycle_stats(spec, workers=workers)
        extra = {"preset": preset}
        if isinstance(graph, LatticeZ) and graph.dim == 2:
            bounds = shell_bounds(
                analytic_trap_probability(LatticeTrap(2)))
            extra["reference"] = {
                "trap_probability": _fmt_fraction(Fraction(1, 192)),
                "expected_vertices_upper_bound":
                    float(bounds.spiral_max_vertex_bound),
            }
        return result, extra

    if preset == "kn-coverage":
        n = args.n or 1000
        result = ex.kn_coverage(n, trials or 10**4, seed, workers=workers)
        exact = ex.occupancy_x_exact(n)
        extra = {"preset": preset, "n": n, "reference": {
            "coverage_lower_bound": (1 - 1 / math.e) * n,
            "occupancy_exact": float(exact),
            "occupancy_exact_fraction": _fmt_fraction(exact),
        }}
        return result, extra

    if preset == "kn-arcs":
        n = args.n or 1000
        result = ex.kn_arcs_to_cycle(n, trials or 10**4, seed,
                                     workers=workers)
        exact = ex.z_process(n, "exact")
        extra = {"preset": preset, "n": n, "reference": {
            "repeat_process_exact": float(exact),
            "conjectured_ratio": 1.8,
            "conjectured_arcs": 1.8 * n,
        }}
        return result, extra

    if preset == "grid-tours":
        k = args.k or 3
        if args.n_values:
            n_values = [int(tok) for tok in args.n_values.split(",")]
        else:
            n_values = [32, 64, 128, 256, 512, 1024]
        report = ex.grid_longest_tour(k, n_values, trials or 100, seed,
                                      workers=workers)
        summary = {
            "preset": preset, "k": k, "n_values": n_values,
            "trials": trials or 100, "seed": seed,
            "table": [{"rows": r.rows, "cols": r.cols, "trials": r.trials,
                       "max_unique_vertices": r.max_unique_vertices,
                       "mean_unique_vertices": r.mean_unique_vertices}
                      for r in report.rows],
            "log_fit": {"slope": report.log_fit_slope,
                        "intercept": report.log_fit_intercept},
        }
        return None, summary

    if preset == "tree-escape":
        depth = args.depth_cap or 20
        res = ex.tree_escape(depth, trials or 10**5, seed)
        summary = {
            "preset": preset, "depth_cap": depth, "trials": res.trials,
            "seed": seed,
            "empirical_frequency": res.empirical_frequency,
            "ci99_half_width": res.ci99_half_width,
            "exact_truncated_product": _fmt_fraction(
                res.exact_truncated_product),
            "exact_truncated_product_float": float(
                res.exact_truncated_product),
            "limit_estimate": res.limit_estimate,
            "e_minus_2": math.exp(-2),
            "exceeds_e_minus_2": res.exceeds_e_minus_2,
        }
        return None, summary

    if preset == "occupancy":
        n = args.n or 1000
        mc = ex.occupancy_x_mc(n, trials or 10**4, seed)
        exact = ex.occupancy_x_exact(n)
        summary = {
            "preset": preset, "n": n, "trials": trials or 10**4,
            "seed": seed,
            "exact": float(exact),
            "exact_fraction": _fmt_fraction(exact),
            "monte_carlo_mean": mc.mean,
            "monte_carlo_ci99": [mc.ci99_low, mc.ci99_high],
            "asymptote_ratio": 1 - 1 / math.e,
        }
        return None, summary

    if preset == "zprocess":
        n = args.n or 1000
        mc = ex.z_process_mc(n, trials or 10**4, seed)
        exact = ex.z_process(n, "exact")
        summary = {
            "preset": preset, "n": n, "trials": trials or 10**4,
            "seed": seed,
            "exact": float(exact),
            "monte_carlo_mean": mc.mean,
            "monte_carlo_ci99": [mc.ci99_low, mc.ci99_high],
            "conjectured_ratio": 1.8,
        }
        if n <= 3:
            summary["brute_force"] = _fmt_fraction(ex.z_process_brute_force(n))
        return None, summary

    if preset == "trap-frequency":
        dim = args.dim or 2
        samples = args.samples or trials or 10**6
        res = ex.mc_event_frequency(ex.TrapEntryEvent(dim), samples, seed)
        summary = {
            "preset": preset, "dim": dim, "samples": samples, "seed": seed,
            "empirical": res.empirical,
            "hits": res.hits,
            "ci99_half_width": res.ci99_half_width,
            "analytic": _fmt_fraction(res.analytic),
            "analytic_float": float(res.analytic),
            "within_3_sigma": res.within_3_sigma,
        }
        return None, summary

    raise UsageError(f"unknown preset {preset!r}")


def cmd_experiment(args) -> int:
    result, extra = run_preset(args)
    if result is not None:
        summary = _batch_summary(result, extra)
        if args.out:
            ex.write_rows_csv(args.out, result.rows)
        line = (f"experiment {args.preset}: trials={len(result.rows)} "
                f"fraction_cycled={result.fraction_cycled:.4f} "
                f"mean_unique_vertices="
                f"{result.metric('unique_vertices').mean:.2f}")
    else:
        summary = extra
        if args.out:
            rows = summary.get("table")
            if rows:
                with open(args.out, "w", newline="") as fh:
                    import csv as _csv
                    writer = _csv.writer(fh)
                    writer.writerow(["rows", "cols", "trials",
                                     "max_unique_vertices",
                                     "mean_unique_vertices"])
                    for r in rows:
                        writer.writerow([r["rows"], r["cols"], r["trials"],
                                         r["max_unique_vertices"],
                                         r["mean_unique_vertices"]])
        line = f"experiment {args.preset}: done"
    summary["seed"] = args.seed
    if args.summary:
        ex.write_summary_json(args.summary, summary)
    print(line)
    return 0


# ---------------------------------------------------------------------------


def cmd_bound(args) -> int:
    kind_name = args.trap
    if kind_name == "t-lattice":
        kind = LatticeTrap(args.dim or 2)
    elif kind_name == "hex-spire":
        kind = HexSpire()
    elif kind_name == "straight-path":
        if args.degree is None or args.length is None:
            raise UsageError("straight-path requires --degree and --length")
        kind = StraightPath(args.degree, args.length)
    elif kind_name == "star":
        if args.degree is None:
            raise UsageError("star requires --degree (center degree)")
        neighbor_degrees = tuple(
            int(tok) for tok in (args.neighbor_degrees or "").split(",")
            if tok)
        kind = StarTrap(args.degree, neighbor_degrees)
    else:
        raise UsageError(f"unknown trap kind {kind_name!r}")
    p = analytic_trap_probability(kind)
    payload = {"kind": kind_name, "probability": _fmt_fraction(p)}
    if 0 < p < 1:
        bounds = shell_bounds(p)
        payload["expected_shells"] = float(bounds.expected_shells)
        payload["straight_line_bound"] = float(
            bounds.straight_line_vertex_bound)
        payload["spiral_bound"] = float(bounds.spiral_max_vertex_bound)
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_graph(args) -> int:
    if args.action != "check":
        raise UsageError(f"unknown graph action {args.action!r}")
    with open(args.path) as fh:
        graph = load_explicit(fh.read())
    degrees = [graph.degree(v) for v in graph.vertices()]
    print(f"graph check {args.path}: ok vertices={graph.vertex_count()} "
          f"arcs={graph.directed_arc_count()} "
          f"degree_min={min(degrees)} degree_max={max(degrees)}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="basicwalk",
                     description="Basic-walk simulation laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("walk", help="run one basic walk")
    w.add_argument("--graph", required=True)
    w.add_argument("--labeling", default="lazy")
    w.add_argument("--start", default=None)
    w.add_argument("--port", type=int, default=1)
    w.add_argument("--budget", type=int, default=10**6)
    w.add_argument("--seed", type=int, default=None)
    w.add_argument("--trace", default=None)
    w.add_argument("--out", default=None)

    e = sub.add_parser("experiment", help="run a preset experiment batch")
    e.add_argument("--preset", required=True, choices=PRESETS)
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--dim", type=int, default=None)
    e.add_argument("--k", type=int, default=None)
    e.add_argument("--n-values", default=None,
                   help="comma-separated grid widths for grid-tours")
    e.add_argument("--depth-cap", type=int, default=None)
    e.add_argument("--trials", type=int, default=None)
    e.add_argument("--samples", type=int, default=None)
    e.add_argument("--budget", type=int, default=None)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--workers", type=int, default=None)
    e.add_argument("--out", default=None, help="per-trial CSV path")
    e.add_argument("--summary", default=None, help="summary JSON path")

    b = sub.add_parser("bound", help="exact trap probabilities and bounds")
    b.add_argument("--trap", required=True,
                   choices=["t-lattice", "hex-spire", "straight-path",
                            "star"])
    b.add_argument("--dim", type=int, default=None)
    b.add_argument("--degree", type=int, default=None)
    b.add_argument("--length", type=int, default=None)
    b.add_argument("--neighbor-degrees", default=None,
                   help="comma-separated degrees for the star trap")

    g = sub.add_parser("graph", help="graph file utilities")
    g.add_argument("action", choices=["check"])
    g.add_argument("path")

    return parser


_COMMANDS = {"walk": cmd_walk, "experiment": cmd_experiment,
             "bound": cmd_bound, "graph": cmd_graph}


def _load_config(argv):
    """Pull --config out of argv and return (config dict, remaining argv)."""
    out = []
    config = {}
    i = 0
    while i < len(argv):
        if argv[i] == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            with open(argv[i + 1]) as fh:
                config = json.load(fh)
            i += 2
        elif argv[i].startswith("--config="):
            with open(argv[i].split("=", 1)[1]) as fh:
                config = json.load(fh)
            i += 1
        else:
            out.append(argv[i])
            i += 1
    if not isinstance(config, dict):
        raise UsageError("config file must hold a JSON object")
    return config, out


def _merge_config(args, config: dict):
    for key, value in config.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, attr) is None:
            setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        config, argv = _load_config(list(argv))
        args = parser.parse_args(argv)
        args = _merge_config(args, config)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (GraphError, LabelingError, TrapError, WalkError,
            ex.ExperimentError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
