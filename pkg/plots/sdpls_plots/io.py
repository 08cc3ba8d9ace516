"""CSV readers with schema validation for the solver's output files."""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "read_table", "require_columns"]


class SchemaError(ValueError):
    """CSV does not match the expected solver output schema."""


def read_table(path) -> dict[str, np.ndarray]:
    """Read a comma-separated file with a header row into column arrays.

    Rejects files that are empty beyond the header and rows whose field
    count disagrees with the header.
    """
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = [c.strip() for c in lines[0].split(",")]
    if len(lines) == 1:
        raise SchemaError(f"{path}: no data rows beyond the header")
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        fields = ln.split(",")
        if len(fields) != len(header):
            raise SchemaError(f"{path}:{k}: expected {len(header)} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise SchemaError(f"{path}:{k}: non-numeric field ({exc})") from exc
    data = np.asarray(rows)
    return {name: data[:, i] for i, name in enumerate(header)}


def require_columns(table: dict[str, np.ndarray], needed, path) -> None:
    for col in needed:
        if col not in table:
            raise SchemaError(f"{path}: missing required column '{col}'")
