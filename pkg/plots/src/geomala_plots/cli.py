"""Command line entry point: plots <kind> --in ... --out ...

Exits 0 on success, 2 on schema violations or bad arguments.
"""

from __future__ import annotations

import argparse
import sys

from .render import plot_acf, plot_compare, plot_trace, plot_tuning
from .schemas import SchemaError


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from geomala output files")
    parser.add_argument("kind", choices=["trace", "acf", "tuning", "compare"])
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input trace CSVs or report JSONs")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--coord", type=int, default=1,
                        help="1-based coordinate for trace/acf plots")
    parser.add_argument("--max-lag", type=int, default=50)
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)

    try:
        if args.kind == "trace":
            plot_trace(args.inputs, args.coord, args.out, title=args.title)
        elif args.kind == "acf":
            if len(args.inputs) != 1:
                raise SchemaError("acf takes exactly one trace CSV")
            plot_acf(args.inputs[0], args.out, coordinate=args.coord,
                     max_lag=args.max_lag, title=args.title)
        elif args.kind == "tuning":
            if len(args.inputs) != 1:
                raise SchemaError("tuning takes exactly one report JSON")
            plot_tuning(args.inputs[0], args.out, title=args.title)
        else:
            plot_compare(args.inputs, args.out, title=args.title)
    except (SchemaError, OSError) as err:
        print(f"plots: {err}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
