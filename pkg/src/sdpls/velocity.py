"""Closed-form incompressible velocity fields with analytic derivatives.

Catalog ids: vortex_box, time_periodic, linear3d, translation, rotation2d.
Every field factors as v(t, x) = time_factor(t) * spatial(x), which the
solver exploits to precompute face velocities once per run. All fields are
divergence-free; all except rotation2d also satisfy the wall impermeability
condition v . e_y = 0 on the plane y = 0 (a rigid rotation about a point
cannot be tangential to a straight wall, so rotation2d is meant for
interior-interface tests only).

Derivative conventions:
    eval_gradient -> J with J[i, j] = dv_i / dx_j
    eval_hessian  -> T with T[i, j, k] = d_i d_j v_k
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "AnalyticVelocity",
    "VortexBox",
    "TimePeriodic",
    "Linear3D",
    "Translation",
    "Rotation2D",
    "FieldValidationReport",
    "CATALOG",
    "make_velocity",
    "validate",
    "sample_lattice",
]


class AnalyticVelocity:
    """Base class; subclasses provide the spatial part and its derivatives."""

    id: str
    dim: int
    # True when the spatial Jacobian does not depend on x (affine fields).
    has_constant_jacobian: bool = True

    def time_factor(self, t: float) -> float:
        return 1.0

    def spatial(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def spatial_gradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def spatial_hessian(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eval(self, t: float, x) -> np.ndarray:
        """Velocity at (t, x); x may carry leading batch axes, last axis = dim."""
        x = self._check_point(x)
        return self.time_factor(t) * self.spatial(x)

    def eval_gradient(self, t: float, x) -> np.ndarray:
        """Jacobian dv_i/dx_j at (t, x); trace is zero (incompressibility)."""
        x = self._check_point(x)
        return self.time_factor(t) * self.spatial_gradient(x)

    def eval_hessian(self, t: float, x) -> np.ndarray:
        """Second derivatives d_i d_j v_k at (t, x)."""
        x = self._check_point(x)
        return self.time_factor(t) * self.spatial_hessian(x)

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(
                f"field '{self.id}' expects {self.dim}-component points, "
                f"got shape {x.shape}"
            )
        return x


@dataclass
class VortexBox(AnalyticVelocity):
    """v = v0 (-sin(pi x) cos(pi y), cos(pi x) sin(pi y)); steady, 2D."""

    v0: float = -0.2

    id = "vortex_box"
    dim = 2
    has_constant_jacobian = False

    def spatial(self, x):
        sx, cx = np.sin(np.pi * x[..., 0]), np.cos(np.pi * x[..., 0])
        sy, cy = np.sin(np.pi * x[..., 1]), np.cos(np.pi * x[..., 1])
        return self.v0 * np.stack([-sx * cy, cx * sy], axis=-1)

    def spatial_gradient(self, x):
        sx, cx = np.sin(np.pi * x[..., 0]), np.cos(np.pi * x[..., 0])
        sy, cy = np.sin(np.pi * x[..., 1]), np.cos(np.pi * x[..., 1])
        a = self.v0 * np.pi
        row0 = np.stack([-a * cx * cy, a * sx * sy], axis=-1)
        row1 = np.stack([-a * sx * sy, a * cx * cy], axis=-1)
        return np.stack([row0, row1], axis=-2)

    def spatial_hessian(self, x):
        sx, cx = np.sin(np.pi * x[..., 0]), np.cos(np.pi * x[..., 0])
        sy, cy = np.sin(np.pi * x[..., 1]), np.cos(np.pi * x[..., 1])
        b = self.v0 * np.pi ** 2
        T = np.empty(x.shape[:-1] + (2, 2, 2))
        T[..., 0, 0, 0] = b * sx * cy
        T[..., 0, 1, 0] = b * cx * sy
        T[..., 1, 0, 0] = b * cx * sy
        T[..., 1, 1, 0] = b * sx * cy
        T[..., 0, 0, 1] = -b * cx * sy
        T[..., 0, 1, 1] = -b * sx * cy
        T[..., 1, 0, 1] = -b * sx * cy
        T[..., 1, 1, 1] = -b * cx * sy
        return T


@dataclass
class TimePeriodic(AnalyticVelocity):
    """v = cos(pi t / tau) (v0 + c1 x + c2 y, -c1 y); 2D, reverses in time."""

    v0: float = -0.2
    c1: float = 0.1
    c2: float = -2.0
    tau: float = 0.4

    id = "time_periodic"
    dim = 2

    def time_factor(self, t):
        return float(np.cos(np.pi * t / self.tau))

    def spatial(self, x):
        vx = self.v0 + self.c1 * x[..., 0] + self.c2 * x[..., 1]
        vy = -self.c1 * x[..., 1]
        return np.stack([vx, vy], axis=-1)

    def spatial_gradient(self, x):
        J = np.array([[self.c1, self.c2], [0.0, -self.c1]])
        return np.broadcast_to(J, x.shape[:-1] + (2, 2)).copy()

    def spatial_hessian(self, x):
        return np.zeros(x.shape[:-1] + (2, 2, 2))


@dataclass
class Linear3D(AnalyticVelocity):
    """Affine 3D field, incompressible everywhere and impermeable at y = 0:

    v1 = v1_0 + c1 x + c2 y + c3 z
    v2 = -(c1 + c6) y
    v3 = v3_0 + c4 x + c5 y + c6 z
    """

    v1_0: float = 0.3
    v3_0: float = 0.4
    c1: float = 0.1
    c2: float = 0.1
    c3: float = -0.2
    c4: float = 0.3
    c5: float = -0.1
    c6: float = 0.1

    id = "linear3d"
    dim = 3

    def matrix(self) -> np.ndarray:
        """The constant Jacobian (rows = components)."""
        return np.array(
            [
                [self.c1, self.c2, self.c3],
                [0.0, -(self.c1 + self.c6), 0.0],
                [self.c4, self.c5, self.c6],
            ]
        )

    def spatial(self, x):
        v1 = self.v1_0 + self.c1 * x[..., 0] + self.c2 * x[..., 1] + self.c3 * x[..., 2]
        v2 = -(self.c1 + self.c6) * x[..., 1]
        v3 = self.v3_0 + self.c4 * x[..., 0] + self.c5 * x[..., 1] + self.c6 * x[..., 2]
        return np.stack([v1, v2, v3], axis=-1)

    def spatial_gradient(self, x):
        return np.broadcast_to(self.matrix(), x.shape[:-1] + (3, 3)).copy()

    def spatial_hessian(self, x):
        return np.zeros(x.shape[:-1] + (3, 3, 3))


@dataclass
class Translation(AnalyticVelocity):
    """Constant wall-parallel velocity (cy defaults to 0 to respect y = 0)."""

    cx: float = 1.0
    cy: float = 0.0
    cz: float | None = None

    id = "translation"

    @property
    def dim(self):
        return 2 if self.cz is None else 3

    def _vector(self):
        if self.cz is None:
            return np.array([self.cx, self.cy])
        return np.array([self.cx, self.cy, self.cz])

    def spatial(self, x):
        return np.broadcast_to(self._vector(), x.shape).copy()

    def spatial_gradient(self, x):
        d = self.dim
        return np.zeros(x.shape[:-1] + (d, d))

    def spatial_hessian(self, x):
        d = self.dim
        return np.zeros(x.shape[:-1] + (d, d, d))


@dataclass
class Rotation2D(AnalyticVelocity):
    """Rigid rotation v = omega (-(y - yc), x - xc) about (xc, yc); 2D."""

    omega: float = 1.0
    xc: float = 0.5
    yc: float = 0.5

    id = "rotation2d"
    dim = 2

    def spatial(self, x):
        vx = -self.omega * (x[..., 1] - self.yc)
        vy = self.omega * (x[..., 0] - self.xc)
        return np.stack([vx, vy], axis=-1)

    def spatial_gradient(self, x):
        J = np.array([[0.0, -self.omega], [self.omega, 0.0]])
        return np.broadcast_to(J, x.shape[:-1] + (2, 2)).copy()

    def spatial_hessian(self, x):
        return np.zeros(x.shape[:-1] + (2, 2, 2))


CATALOG = {
    "vortex_box": VortexBox,
    "time_periodic": TimePeriodic,
    "linear3d": Linear3D,
    "translation": Translation,
    "rotation2d": Rotation2D,
}


def make_velocity(field_id: str, **params) -> AnalyticVelocity:
    """Instantiate a catalog field by id, overriding default parameters."""
    if field_id not in CATALOG:
        raise ValueError(
            f"unknown velocity field id '{field_id}' "
            f"(known: {', '.join(sorted(CATALOG))})"
        )
    cls = CATALOG[field_id]
    known = set(cls.__dataclass_fields__)
    for name in params:
        if name not in known:
            raise ValueError(
                f"unknown parameter '{name}' for velocity field '{field_id}' "
                f"(known: {', '.join(sorted(known))})"
            )
    return cls(**params)


@dataclass
class FieldValidationReport:
    """Maxima over a deterministic sample set (see validate)."""

    max_abs_divergence: float
    max_abs_wall_normal_velocity: float


def sample_lattice(dim: int, n: int = 50, bounds=None) -> np.ndarray:
    """Deterministic (n^dim, dim) lattice of sample points.

    Default bounds are the unit box in each axis; pass ``bounds`` as a list
    of (lo, hi) pairs to sample a specific domain.
    """
    if bounds is None:
        bounds = [(0.0, 1.0)] * dim
    axes = [np.linspace(lo, hi, n) for lo, hi in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def validate(v: AnalyticVelocity, samples, times=(0.0,)) -> FieldValidationReport:
    """Check incompressibility and wall impermeability over a sample set.

    Divergence is the trace of the analytic Jacobian at each sample; the
    wall-normal entry is |v . e_y| with each sample projected onto y = 0.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[0] == 0 or samples.shape[1] != v.dim:
        raise ValueError(f"samples must be a non-empty (n, {v.dim}) array")
    wall = samples.copy()
    wall[:, 1] = 0.0
    max_div = 0.0
    max_wall = 0.0
    for t in times:
        J = v.eval_gradient(t, samples)
        max_div = max(max_div, float(np.max(np.abs(np.trace(J, axis1=-2, axis2=-1)))))
        max_wall = max(max_wall, float(np.max(np.abs(v.eval(t, wall)[..., 1]))))
    return FieldValidationReport(max_div, max_wall)
