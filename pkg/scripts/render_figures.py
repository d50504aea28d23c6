#!/usr/bin/env python3
"""Render the standard figures from files produced by
generate_figure_inputs.py.  Requires the separate walkplots package."""

import argparse
import pathlib
import sys

try:
    from walkplots.cli import main as walkplots_main
except ImportError:
    print("walkplots is not installed; install the plots/ package first",
          file=sys.stderr)
    sys.exit(1)


def run(argv):
    rc = walkplots_main(argv)
    if rc != 0:
        print(f"render failed ({rc}): {' '.join(argv)}", file=sys.stderr)
        sys.exit(rc)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--indir", default="results")
    parser.add_argument("--outdir", default="figures")
    parser.add_argument("--format", default="png", choices=["png", "svg"])
    args = parser.parse_args()

    indir = pathlib.Path(args.indir)
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ext = args.format

    coverage = sorted(indir.glob("kn_coverage_*.json"))
    argv = ["render", "--kind", "coverage-vs-n",
            "--out", str(outdir / f"coverage_vs_n.{ext}")]
    for s in coverage:
        argv += ["--summary", str(s)]
    run(argv)

    arcs = sorted(indir.glob("kn_arcs_*.json"))
    argv = ["render", "--kind", "arcs-vs-n",
            "--out", str(outdir / f"arcs_vs_n.{ext}")]
    for s in arcs:
        argv += ["--summary", str(s)]
    run(argv)

    tree = sorted(indir.glob("tree_escape_*.json"))
    argv = ["render", "--kind", "tree-escape",
            "--out", str(outdir / f"tree_escape.{ext}")]
    for s in tree:
        argv += ["--summary", str(s)]
    run(argv)

    run(["render", "--kind", "grid-tour-trend",
         "--summary", str(indir / "grid_tours.json"),
         "--out", str(outdir / f"grid_tour_trend.{ext}")])

    run(["render", "--kind", "cycle-histogram",
         "--in", str(indir / "z2_cycling.csv"), "--bins", "20",
         "--out", str(outdir / f"cycle_histogram.{ext}")])

    print(f"figures written under {outdir}/")


if __name__ == "__main__":
    main()
