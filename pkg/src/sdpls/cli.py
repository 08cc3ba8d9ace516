"""Command line front end: run, convergence, validate-field."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, parse_config
from .harness import run_case, run_convergence
from .solver import SolverInstabilityError
from .velocity import CATALOG, make_velocity, sample_lattice, validate


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdpls")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single case and write its outputs")
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--output-dir", type=Path, default=None)

    p_conv = sub.add_parser("convergence", help="mesh-refinement study against the oracle")
    p_conv.add_argument("config", type=Path)
    p_conv.add_argument("--meshes", required=True, help="comma-separated x cell counts, e.g. 100,200,400")
    p_conv.add_argument("--source", choices=("on", "off"), default=None)
    p_conv.add_argument("--output-dir", type=Path, default=None)

    p_val = sub.add_parser("validate-field", help="incompressibility/impermeability check")
    p_val.add_argument("field_id", choices=sorted(CATALOG))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            case = run_case(parse_config(args.config), output_dir=args.output_dir)
            print(f"wrote {case.timeseries_path}")
            if case.reference_path is not None:
                print(f"wrote {case.reference_path}")
            for p in case.snapshot_paths:
                print(f"wrote {p}")
        elif args.command == "convergence":
            cfg = parse_config(args.config)
            meshes = [int(tok) for tok in args.meshes.split(",")]
            source = None if args.source is None else args.source == "on"
            outdir = args.output_dir if args.output_dir is not None else Path(cfg.output_dir)
            outdir.mkdir(parents=True, exist_ok=True)
            out = outdir / "convergence.csv"
            report = run_convergence(cfg, meshes, source_enabled=source, output_path=out)
            for name in ("max_err_x", "max_err_theta", "max_err_kappa", "max_sdf_dev"):
                orders = ", ".join(f"{o:.3f}" for o in report.orders(name))
                print(f"{name}: orders [{orders}]")
            print(f"wrote {out}")
        elif args.command == "validate-field":
            v = make_velocity(args.field_id)
            report = validate(v, sample_lattice(v.dim), times=np.linspace(0.0, 1.0, 5))
            print(f"max |div v|           = {report.max_abs_divergence:.3e}")
            print(f"max |v . e_y| at y=0  = {report.max_abs_wall_normal_velocity:.3e}")
    except (ConfigError, SolverInstabilityError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
