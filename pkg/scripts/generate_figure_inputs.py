#!/usr/bin/env python3
"""Run the experiment presets that feed the figure pipeline.

Writes per-trial CSVs and summary JSONs under an output directory:
complete-graph coverage and arcs-to-cycle over a sweep of n, tree escape
over a sweep of depth caps, the grid tour table, and a planar cycling
batch for the period histogram.
"""

import argparse
import pathlib
import sys

from basicwalk.cli import main as basicwalk_main


def run(argv):
    rc = basicwalk_main(argv)
    if rc != 0:
        print(f"command failed ({rc}): {' '.join(argv)}", file=sys.stderr)
        sys.exit(rc)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--quick", action="store_true",
                        help="smaller trial counts for a fast smoke run")
    args = parser.parse_args()

    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    trials = "500" if args.quick else "5000"
    seed = str(args.seed)

    for n in (100, 200, 400, 700, 1000):
        run(["experiment", "--preset", "kn-coverage", "--n", str(n),
             "--trials", trials, "--seed", seed,
             "--out", str(out / f"kn_coverage_{n}.csv"),
             "--summary", str(out / f"kn_coverage_{n}.json")])
        run(["experiment", "--preset", "kn-arcs", "--n", str(n),
             "--trials", trials, "--seed", seed,
             "--out", str(out / f"kn_arcs_{n}.csv"),
             "--summary", str(out / f"kn_arcs_{n}.json")])

    for depth in (4, 8, 12, 16, 20):
        run(["experiment", "--preset", "tree-escape",
             "--depth-cap", str(depth), "--trials",
             "2000" if args.quick else "100000", "--seed", seed,
             "--summary", str(out / f"tree_escape_{depth}.json")])

    run(["experiment", "--preset", "grid-tours", "--k", "3",
         "--n-values", "32,64,128,256,512,1024",
         "--trials", "30" if args.quick else "100", "--seed", seed,
         "--out", str(out / "grid_tours.csv"),
         "--summary", str(out / "grid_tours.json")])

    run(["experiment", "--preset", "z2-cycling", "--trials",
         "1000" if args.quick else "10000", "--budget", "10000000",
         "--seed", seed,
         "--out", str(out / "z2_cycling.csv"),
         "--summary", str(out / "z2_cycling.json")])

    print(f"all outputs written under {out}/")


if __name__ == "__main__":
    main()
