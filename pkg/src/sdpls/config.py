"""Run configuration: dataclass, validation, and the key = value file parser.

Config files are plain text, one ``key = value`` assignment per line, with
``#`` comments and blank lines ignored. Vector values are space separated.
Velocity parameters are namespaced as ``velocity.<name>``. Unknown keys and
unknown velocity parameters are rejected with messages naming the offender.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .grid import Grid, make_grid
from .velocity import AnalyticVelocity, make_velocity

__all__ = ["SolverConfig", "ConfigError", "parse_config"]


class ConfigError(ValueError):
    """Invalid configuration file or parameter set."""


@dataclass
class SolverConfig:
    dim: int
    origin: tuple[float, ...]
    extent: tuple[float, ...]
    cells: tuple[int, ...]
    velocity_id: str
    velocity_params: dict = field(default_factory=dict)
    surface_center: tuple[float, ...] = ()
    surface_radius: float = 0.0
    cfl: float = 0.5
    c_r: float = 0.5
    epsilon: float = 1e-12
    w1: float = 0.05
    w2: float = 0.15
    source_enabled: bool = True
    t_end: float = 0.0
    snapshot_times: tuple[float, ...] = ()
    output_dir: str = "out"
    contact_selector: str = "rightmost"
    contact_point0: tuple[float, ...] | None = None

    def validate(self) -> None:
        self.make_grid()  # grid invariants (dim, spacing, cell counts)
        v = self.make_velocity()
        if v.dim != self.dim:
            raise ConfigError(
                f"velocity: field '{self.velocity_id}' is {v.dim}D but dim = {self.dim}"
            )
        if len(self.surface_center) != self.dim:
            raise ConfigError(
                f"surface_center: expected {self.dim} components, got {len(self.surface_center)}"
            )
        if self.surface_radius <= 0:
            raise ConfigError(f"surface_radius: must be positive, got {self.surface_radius}")
        if not 0 < self.cfl <= 1:
            raise ConfigError(f"cfl: must lie in (0, 1], got {self.cfl}")
        if not 0 < self.c_r < 1:
            raise ConfigError(f"c_r: must lie in (0, 1), got {self.c_r}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon: must be positive, got {self.epsilon}")
        if not 0 < self.w1 < self.w2:
            raise ConfigError(f"w2: mollifier widths need 0 < w1 < w2, got w1={self.w1}, w2={self.w2}")
        if self.t_end < 0:
            raise ConfigError(f"t_end: must be non-negative, got {self.t_end}")
        for s in self.snapshot_times:
            if not 0 <= s <= self.t_end:
                raise ConfigError(
                    f"snapshot_times: {s} outside [0, t_end] = [0, {self.t_end}]"
                )
        if self.contact_selector not in ("rightmost", "leftmost"):
            raise ConfigError(
                f"contact_selector: must be 'rightmost' or 'leftmost', got {self.contact_selector!r}"
            )
        if self.dim == 3:
            if self.contact_point0 is None:
                raise ConfigError("contact_point0: required for 3D runs (seed of the wall marker)")
            if len(self.contact_point0) != 3:
                raise ConfigError(
                    f"contact_point0: expected 3 components, got {len(self.contact_point0)}"
                )
            if abs(self.contact_point0[1]) > 1e-12:
                raise ConfigError("contact_point0: must lie on the wall y = 0")
        elif self.contact_point0 is not None:
            raise ConfigError("contact_point0: only meaningful for 3D runs")

    def make_grid(self) -> Grid:
        try:
            return make_grid(self.dim, self.origin, self.extent, self.cells)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def make_velocity(self) -> AnalyticVelocity:
        try:
            return make_velocity(self.velocity_id, **self.velocity_params)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"velocity: {exc}") from exc

    def with_cells_x(self, nx: int) -> "SolverConfig":
        """Copy of this config remeshed to nx cells along x (spacing scales).

        The other axes must stay integral cell counts at the new spacing.
        """
        h = self.extent[0] / nx
        cells = [nx]
        for a in range(1, self.dim):
            n = self.extent[a] / h
            if abs(n - round(n)) > 1e-9:
                raise ConfigError(
                    f"cells: {nx} cells along x gives non-integer count {n} on axis {a}"
                )
            cells.append(int(round(n)))
        cfg = replace(self, cells=tuple(cells), velocity_params=dict(self.velocity_params))
        cfg.validate()
        return cfg


_SCALAR_KEYS = {
    "cfl": float,
    "c_r": float,
    "epsilon": float,
    "w1": float,
    "w2": float,
    "t_end": float,
    "surface_radius": float,
    "dim": int,
}
_VECTOR_KEYS = {"origin", "extent", "cells", "surface_center", "snapshot_times", "contact_point0"}
_BOOL_TRUE = {"on", "true", "yes", "1"}
_BOOL_FALSE = {"off", "false", "no", "0"}


def _parse_floats(key: str, text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split())
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse '{text}' as numbers") from exc


def parse_config(path) -> SolverConfig:
    """Parse and fully validate a config file; see the module docstring for syntax."""
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got '{text}'")
            key, value = (part.strip() for part in text.split("=", 1))
            if key in raw:
                raise ConfigError(f"{path}:{lineno}: duplicate key '{key}'")
            raw[key] = value

    kwargs: dict = {"velocity_params": {}}
    for key, value in raw.items():
        if key in _SCALAR_KEYS:
            try:
                kwargs[key] = _SCALAR_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"{key}: cannot parse '{value}'") from exc
        elif key in _VECTOR_KEYS:
            vals = _parse_floats(key, value)
            kwargs[key] = tuple(int(v) for v in vals) if key == "cells" else vals
        elif key == "velocity":
            kwargs["velocity_id"] = value
        elif key.startswith("velocity."):
            name = key[len("velocity.") :]
            kwargs["velocity_params"][name] = float(value)
        elif key == "source":
            low = value.lower()
            if low in _BOOL_TRUE:
                kwargs["source_enabled"] = True
            elif low in _BOOL_FALSE:
                kwargs["source_enabled"] = False
            else:
                raise ConfigError(f"source: expected on/off, got '{value}'")
        elif key == "output_dir":
            kwargs["output_dir"] = value
        elif key == "contact_selector":
            kwargs["contact_selector"] = value
        else:
            raise ConfigError(f"unknown config key '{key}'")

    required = ("dim", "origin", "extent", "cells", "velocity_id", "surface_center",
                "surface_radius", "t_end")
    for name in required:
        if name not in kwargs:
            shown = "velocity" if name == "velocity_id" else name
            raise ConfigError(f"missing required config key '{shown}'")

    cfg = SolverConfig(**kwargs)
    cfg.validate()
    return cfg
