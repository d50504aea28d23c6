"""Figure rendering command line: one figure per invocation.

    walkplots render --kind <kind> --in <csv> --summary <json> --out <image>

--in and --summary are repeatable for the vs-n figure kinds.  Exit codes:
0 success, 1 usage error, 2 missing input or schema mismatch.
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureError, FigureSpec, render


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="walkplots",
                     description="Render figures from experiment outputs")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="render one figure")
    r.add_argument("--kind", required=True, choices=KINDS)
    r.add_argument("--in", dest="csv_paths", action="append", default=[],
                   help="experiment CSV input (repeatable)")
    r.add_argument("--summary", dest="summary_paths", action="append",
                   default=[], help="summary JSON input (repeatable)")
    r.add_argument("--out", required=True, help="output image (png or svg)")
    r.add_argument("--bins", type=int, default=20,
                   help="bin count for cycle-histogram")
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = build_parser().parse_args(argv)
        spec = FigureSpec(kind=args.kind,
                          csv_paths=tuple(args.csv_paths),
                          summary_paths=tuple(args.summary_paths),
                          out_path=args.out, bins=args.bins)
        render(spec)
        print(f"render {args.kind}: wrote {args.out}")
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
