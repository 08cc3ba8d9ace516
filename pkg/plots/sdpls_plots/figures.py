"""Figure rendering: time-series panels and log-log mesh studies.

Output is deterministic for identical inputs: the Agg backend, fixed
styles, no timestamps (SVG dates are stripped and the id hash salt is
pinned). PNG and SVG are supported, chosen by the output suffix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sdpls-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .io import SchemaError, read_table, require_columns  # noqa: E402

__all__ = ["QUANTITIES", "PlotSpec", "plot_timeseries", "plot_convergence"]

# quantity selector -> (CSV column, axis label)
QUANTITIES = {
    "x": ("x", "contact point x(t)"),
    "theta": ("theta_deg", "contact angle [deg]"),
    "kappa": ("kappa", "curvature at contact point"),
    "grad_norm": ("grad_norm", "|grad phi| at contact point"),
}

_ERROR_COLUMNS = (
    "max_err_x",
    "max_err_theta",
    "max_err_kappa",
    "max_sdf_dev",
    "final_grad_norm_err",
)


def _savefig(fig, output: Path) -> Path:
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    meta = {"Date": None} if output.suffix == ".svg" else {}
    fig.savefig(output, dpi=150, metadata=meta)
    plt.close(fig)
    return output


@dataclass
class PlotSpec:
    """What to draw: input CSVs, a quantity selector, and the output path."""

    inputs: list
    quantity: str
    output: Path
    reference: Path | None = None
    loglog: bool = False
    labels: list = field(default_factory=list)

    def validate(self) -> None:
        if self.quantity not in set(QUANTITIES) | {"convergence"}:
            raise ValueError(
                f"unknown quantity '{self.quantity}' "
                f"(choose from {', '.join(sorted(set(QUANTITIES) | {'convergence'}))})"
            )
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        for p in list(self.inputs) + ([self.reference] if self.reference else []):
            if not Path(p).is_file():
                raise FileNotFoundError(f"input CSV not found: {p}")


def plot_timeseries(spec: PlotSpec) -> Path:
    """One panel of the selected quantity over time, optional oracle overlay.

    Each input CSV becomes one solid curve (labelled by file stem); the
    reference, when given, is a dashed black overlay. Single-row inputs
    render as a lone marker.
    """
    spec.validate()
    if spec.quantity == "convergence":
        return plot_convergence(spec.inputs[0], spec.output)
    column, ylabel = QUANTITIES[spec.quantity]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, p in enumerate(spec.inputs):
        table = read_table(p)
        require_columns(table, ("t", column), p)
        label = spec.labels[i] if i < len(spec.labels) else Path(p).stem
        style = {"marker": "o", "linestyle": "none"} if len(table["t"]) == 1 else {}
        ax.plot(table["t"], table[column], label=label, **style)
    if spec.reference is not None:
        ref = read_table(spec.reference)
        require_columns(ref, ("t", column), spec.reference)
        ax.plot(ref["t"], ref[column], "k--", linewidth=1.0, label="reference")
    if spec.loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _savefig(fig, spec.output)


def plot_convergence(report_csv, output) -> Path:
    """Log-log maximum errors vs mesh size h with a slope-1 guide line.

    The guide is anchored at the first mesh's value of the first error
    column present, so first-order data lies on top of it.
    """
    table = read_table(report_csv)
    require_columns(table, ("h",), report_csv)
    present = [c for c in _ERROR_COLUMNS if c in table]
    if not present:
        raise SchemaError(f"{report_csv}: no error columns found (expected one of {_ERROR_COLUMNS})")
    h = table["h"]
    if len(h) < 2:
        raise ValueError(f"{report_csv}: mesh study needs at least 2 meshes, got {len(h)}")
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for c in present:
        ax.loglog(h, table[c], marker="o", label=c)
    anchor = table[present[0]][0]
    ax.loglog(h, anchor * (h / h[0]), "k--", linewidth=1.0, label="slope 1")
    ax.set_xlabel("h")
    ax.set_ylabel("max error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _savefig(fig, output)
