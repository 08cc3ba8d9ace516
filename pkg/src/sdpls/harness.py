"""Case and convergence-study drivers with CSV/VTK output.

Outputs per run directory:
    timeseries.csv   step,t,x,(z,)theta_deg,kappa,grad_norm,dt  (one row per step)
    reference.csv    characteristics oracle, fixed 10-column schema
    phi_*.vtk        legacy structured-points snapshots at configured times

All numbers are written with 17 significant digits so reruns diff exactly;
iteration orders are fixed, so identical configs give bit-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import ConfigError, SolverConfig
from .grid import ScalarField
from .oracle import ReferenceTrajectory, integrate_reference, initial_hessian_sphere
from .solver import RunResult, run

__all__ = [
    "CaseResult",
    "ConvergenceReport",
    "run_case",
    "run_convergence",
    "compare_with_reference",
    "write_vtk_snapshot",
    "initial_contact_point",
    "reference_for_config",
    "observed_orders",
]

_FMT = "{:.17g}"


def _fmt_row(values) -> str:
    return ",".join(_FMT.format(v) for v in values)


def initial_contact_point(config: SolverConfig) -> np.ndarray | None:
    """Analytic contact point of the initial circle/sphere on the wall y = 0.

    2D: the rightmost/leftmost crossing cx +- sqrt(R^2 - cy^2), or None when
    the circle does not reach the wall. 3D: the configured marker seed.
    """
    if config.dim == 3:
        return None if config.contact_point0 is None else np.asarray(config.contact_point0)
    cx, cy = config.surface_center
    if abs(cy) >= config.surface_radius:
        return None
    half = math.sqrt(config.surface_radius**2 - cy**2)
    return np.array([cx + half if config.contact_selector == "rightmost" else cx - half, 0.0])


def reference_for_config(config: SolverConfig, dt_ref: float = 1e-4) -> ReferenceTrajectory | None:
    """Characteristics oracle seeded at the initial contact point (None if detached)."""
    x0 = initial_contact_point(config)
    if x0 is None:
        return None
    center = np.asarray(config.surface_center, dtype=float)
    radial = x0 - center
    dist = np.linalg.norm(radial)
    if abs(dist - config.surface_radius) > 1e-6 * config.surface_radius:
        raise ConfigError(
            f"contact_point0: distance {dist:.6g} from surface_center does not match "
            f"surface_radius {config.surface_radius:.6g}"
        )
    n0 = radial / dist
    H0 = initial_hessian_sphere(center, config.surface_radius, x0)
    return integrate_reference(
        config.make_velocity(), x0, n0, H0, grad0=1.0, t_end=config.t_end, dt_ref=dt_ref
    )


def write_vtk_snapshot(phi: ScalarField, path, name: str = "phi") -> None:
    """Legacy ASCII structured-points file with cell centers as points.

    DIMENSIONS are the cell counts, ORIGIN the first cell center, and the
    scalar array is written x-fastest, as the format requires.
    """
    grid = phi.grid
    dims = list(grid.cells) + [1] * (3 - grid.dim)
    origin = [grid.origin[a] + 0.5 * grid.spacing for a in range(grid.dim)]
    origin += [0.0] * (3 - grid.dim)
    lines = [
        "# vtk DataFile Version 2.0",
        "sdpls snapshot",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        "DIMENSIONS {} {} {}".format(*dims),
        "ORIGIN " + " ".join(_FMT.format(v) for v in origin),
        "SPACING " + " ".join(_FMT.format(grid.spacing) for _ in range(3)),
        f"POINT_DATA {grid.num_cells}",
        f"SCALARS {name} double 1",
        "LOOKUP_TABLE default",
    ]
    flat = phi.values.flatten(order="F")  # x varies fastest
    lines.extend(_FMT.format(v) for v in flat)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class CaseResult:
    config: SolverConfig
    result: RunResult
    reference: ReferenceTrajectory | None
    output_dir: Path
    timeseries_path: Path
    reference_path: Path | None
    snapshot_paths: list[Path]


def _write_timeseries(path: Path, config: SolverConfig, result: RunResult) -> None:
    cols = ["step", "t", "x"] + (["z"] if config.dim == 3 else []) + [
        "theta_deg",
        "kappa",
        "grad_norm",
        "dt",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for step, dt, rec in zip(result.steps, result.dts, result.records):
            row = [step, rec.t, rec.x[0]]
            if config.dim == 3:
                row.append(rec.x[2])
            row += [rec.theta_deg, rec.kappa, rec.grad_norm, dt]
            fh.write(_fmt_row(row) + "\n")


def run_case(config: SolverConfig, output_dir=None) -> CaseResult:
    """Run one case and write timeseries.csv, reference.csv and snapshots."""
    config.validate()
    outdir = Path(output_dir) if output_dir is not None else Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    result = run(config)
    ts_path = outdir / "timeseries.csv"
    _write_timeseries(ts_path, config, result)

    reference = reference_for_config(config)
    ref_path = None
    if reference is not None:
        ref_path = outdir / "reference.csv"
        reference.write_csv(ref_path)

    snapshot_paths = []
    for t, phi in result.snapshots:
        p = outdir / f"phi_t{_FMT.format(t)}.vtk"
        write_vtk_snapshot(phi, p)
        snapshot_paths.append(p)
    return CaseResult(config, result, reference, outdir, ts_path, ref_path, snapshot_paths)


def observed_orders(errors) -> list[float]:
    """log2(e_coarse / e_fine) for consecutive entries (meshes halving)."""
    errors = [float(e) for e in errors]
    return [math.log2(c / f) for c, f in zip(errors[:-1], errors[1:])]


@dataclass
class ConvergenceRow:
    cells_x: int
    h: float
    max_err_x: float
    max_err_theta: float
    max_err_kappa: float
    max_sdf_dev: float
    final_grad_norm_err: float


_REPORT_COLUMNS = (
    "cells_x",
    "h",
    "max_err_x",
    "max_err_theta",
    "max_err_kappa",
    "max_sdf_dev",
    "final_grad_norm_err",
)


@dataclass
class ConvergenceReport:
    """Per-mesh maximum errors against the oracle plus pairwise orders."""

    rows: list[ConvergenceRow]

    def errors(self, name: str) -> list[float]:
        return [getattr(r, name) for r in self.rows]

    def orders(self, name: str) -> list[float]:
        return observed_orders(self.errors(name))

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(_REPORT_COLUMNS) + "\n")
            for r in self.rows:
                fh.write(_fmt_row([getattr(r, c) for c in _REPORT_COLUMNS]) + "\n")


def _series(result: RunResult):
    t = np.array([r.t for r in result.records])
    x = np.stack([r.x for r in result.records])
    theta = np.array([r.theta_deg for r in result.records])
    kappa = np.array([r.kappa for r in result.records])
    gnorm = np.array([r.grad_norm for r in result.records])
    return t, x, theta, kappa, gnorm


def compare_with_reference(result: RunResult, reference: ReferenceTrajectory) -> dict[str, float]:
    """Maximum pointwise errors of the recorded series against the oracle."""
    t, x, theta, kappa, gnorm = _series(result)
    ref = reference.interp(t)
    if x.shape[1] == 3:
        err_x = np.hypot(x[:, 0] - ref["x"], x[:, 2] - ref["z"])
    else:
        err_x = np.abs(x[:, 0] - ref["x"])
    return {
        "max_err_x": float(np.max(err_x)),
        "max_err_theta": float(np.max(np.abs(theta - ref["theta_deg"]))),
        "max_err_kappa": float(np.max(np.abs(kappa - ref["kappa"]))),
        "max_sdf_dev": float(np.max(np.abs(1.0 - gnorm))),
        "final_grad_norm_err": float(abs(gnorm[-1] - ref["grad_norm"][-1])),
    }


def run_convergence(
    config: SolverConfig,
    meshes,
    source_enabled: bool | None = None,
    output_path=None,
) -> ConvergenceReport:
    """Run the case on a sequence of meshes (x-cell counts halving in h).

    Each mesh count must double the previous one. Errors are measured per
    record time against a single oracle trajectory (the reference does not
    depend on the mesh). Snapshots are disabled for these runs.
    """
    meshes = [int(m) for m in meshes]
    if len(meshes) < 2:
        raise ValueError("need at least two meshes for a convergence study")
    for c, f in zip(meshes[:-1], meshes[1:]):
        if f != 2 * c:
            raise ValueError(f"meshes must refine by factor 2, got {c} -> {f}")
    base = replace(config, snapshot_times=(), velocity_params=dict(config.velocity_params))
    if source_enabled is not None:
        base = replace(base, source_enabled=source_enabled)
    reference = reference_for_config(base)
    if reference is None:
        raise ConfigError("surface_center: initial surface does not meet the wall y = 0")
    rows = []
    for nx in meshes:
        cfg = base.with_cells_x(nx)
        result = run(cfg)
        errs = compare_with_reference(result, reference)
        rows.append(ConvergenceRow(cells_x=nx, h=cfg.extent[0] / nx, **errs))
    report = ConvergenceReport(rows)
    if output_path is not None:
        report.write_csv(output_path)
    return report
