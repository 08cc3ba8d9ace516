"""Script entry point: render figures from solver CSVs into a directory.

    python -m sdpls_plots timeseries RUN.csv [RUN2.csv ...] --quantity theta \
        [--reference REF.csv] [--outdir figs] [--format png|svg]
    python -m sdpls_plots convergence REPORT.csv [--outdir figs] [--format png|svg]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import QUANTITIES, PlotSpec, plot_convergence, plot_timeseries
from .io import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdpls-plots")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ts = sub.add_parser("timeseries", help="time series of one contact quantity")
    p_ts.add_argument("csv", nargs="+", type=Path)
    p_ts.add_argument("--quantity", required=True, choices=sorted(QUANTITIES))
    p_ts.add_argument("--reference", type=Path, default=None)
    p_ts.add_argument("--outdir", type=Path, default=Path("figs"))
    p_ts.add_argument("--format", choices=("png", "svg"), default="png")
    p_ts.add_argument("--loglog", action="store_true")

    p_cv = sub.add_parser("convergence", help="log-log mesh study with slope-1 guide")
    p_cv.add_argument("csv", type=Path)
    p_cv.add_argument("--outdir", type=Path, default=Path("figs"))
    p_cv.add_argument("--format", choices=("png", "svg"), default="png")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "timeseries":
            out = args.outdir / f"{args.quantity}.{args.format}"
            spec = PlotSpec(
                inputs=list(args.csv),
                quantity=args.quantity,
                output=out,
                reference=args.reference,
                loglog=args.loglog,
            )
            print(f"wrote {plot_timeseries(spec)}")
        else:
            out = args.outdir / f"convergence.{args.format}"
            print(f"wrote {plot_convergence(args.csv, out)}")
    except (SchemaError, ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
