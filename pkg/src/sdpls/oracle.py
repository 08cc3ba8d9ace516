"""Reference solutions along Lagrangian characteristics.

For passive transport the level set gradient g = grad phi and Hessian
H = grad grad phi obey ODEs along a characteristic x(t):

    dx/dt = v(t, x)
    dg/dt = -(grad v)^T g
    dH/dt = -(grad v)^T H - H (grad v) - T . g,   T[i,j,k] = d_i d_j v_k

(the H equation follows from differentiating the transport equation twice).
The coupled system is integrated with the classical fixed-step RK4 scheme.
Derived per sample: the unit normal n = g/|g| (renormalized at output only;
the raw g is integrated so |g| stays meaningful), the contact angle from
<n, e_y>, and the curvature

    kappa = -(tr H - n^T H n) / |g|,

consistent with the -div(n) convention of the diagnostics. Because the wall
fields satisfy v . e_y = 0 on y = 0, a characteristic seeded on the wall
stays there exactly (every RK stage sees zero normal velocity), and one
seeded at a contact point remains the contact point. |g|(t) equals
exp(integral of the interface generation rate along the path): it is the
reference curve for the plain advection scheme, while the source-enabled
scheme's reference for |grad phi| at the interface is the constant 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .velocity import AnalyticVelocity

__all__ = [
    "ReferenceTrajectory",
    "integrate_reference",
    "initial_hessian_sphere",
]

REFERENCE_CSV_COLUMNS = ("t", "x", "y", "z", "nx", "ny", "nz", "grad_norm", "theta_deg", "kappa")


@dataclass
class ReferenceTrajectory:
    """Dense samples of the characteristic system (arrays share length)."""

    t: np.ndarray        # (m,)
    x: np.ndarray        # (m, dim)
    n: np.ndarray        # (m, dim) unit normals
    grad_norm: np.ndarray  # (m,)
    H: np.ndarray        # (m, dim, dim)
    theta_deg: np.ndarray  # (m,)
    kappa: np.ndarray    # (m,)

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    def interp(self, times) -> dict[str, np.ndarray]:
        """Linear-in-time interpolation of the scalar series and position."""
        times = np.asarray(times, dtype=float)
        out = {
            "theta_deg": np.interp(times, self.t, self.theta_deg),
            "kappa": np.interp(times, self.t, self.kappa),
            "grad_norm": np.interp(times, self.t, self.grad_norm),
        }
        for a, name in enumerate("xyz"[: self.dim]):
            out[name] = np.interp(times, self.t, self.x[:, a])
        return out

    def write_csv(self, path) -> None:
        """Fixed schema t,x,y,z,nx,ny,nz,grad_norm,theta_deg,kappa (2D pads z with 0)."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(REFERENCE_CSV_COLUMNS) + "\n")
            for i in range(len(self.t)):
                x = list(self.x[i]) + [0.0] * (3 - self.dim)
                n = list(self.n[i]) + [0.0] * (3 - self.dim)
                row = [self.t[i], *x, *n, self.grad_norm[i], self.theta_deg[i], self.kappa[i]]
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def initial_hessian_sphere(center, R: float, x0) -> np.ndarray:
    """Hessian of the sphere/circle distance field |x - c| - R at x0.

    H = (I - e_r e_r^T) / |x0 - c| with e_r the unit radial direction; the
    radial direction is a null direction. With |g| = 1 the curvature formula
    gives -(dim-1)/|x0 - c|.
    """
    center = np.asarray(center, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    d = x0 - center
    r = np.linalg.norm(d)
    if r == 0.0:
        raise ValueError("x0 coincides with the sphere center")
    e = d / r
    return (np.eye(len(d)) - np.outer(e, e)) / r


def _emit(x, g, H, out):
    gn = float(np.linalg.norm(g))
    if gn == 0.0:
        raise RuntimeError("gradient norm vanished along the reference trajectory")
    n = g / gn
    theta = float(np.degrees(np.arccos(np.clip(n[1], -1.0, 1.0))))
    kappa = float(-(np.trace(H) - n @ H @ n) / gn)
    out["x"].append(x.copy())
    out["n"].append(n)
    out["grad_norm"].append(gn)
    out["H"].append(H.copy())
    out["theta_deg"].append(theta)
    out["kappa"].append(kappa)


def integrate_reference(
    v: AnalyticVelocity,
    x0,
    n0,
    H0,
    grad0: float = 1.0,
    t_end: float = 1.0,
    dt_ref: float = 1e-4,
) -> ReferenceTrajectory:
    """Integrate the characteristic system with classical RK4 at fixed dt_ref.

    n0 must be a unit vector; the integrated gradient starts at grad0 * n0.
    Every step is emitted (the last one is shortened to land on t_end), so
    the trajectory is dense enough to interpolate at arbitrary times with
    error far below any solver error.
    """
    x = np.asarray(x0, dtype=float).copy()
    n0 = np.asarray(n0, dtype=float)
    if abs(np.linalg.norm(n0) - 1.0) > 1e-12:
        raise ValueError("n0 must be a unit vector")
    if dt_ref <= 0:
        raise ValueError(f"dt_ref must be positive, got {dt_ref}")
    g = grad0 * n0
    H = np.asarray(H0, dtype=float).copy()

    def rhs(t, x, g, H):
        J = v.eval_gradient(t, x)
        T = v.eval_hessian(t, x)
        dx = v.eval(t, x)
        dg = -J.T @ g
        dH = -J.T @ H - H @ J - np.einsum("ijk,k->ij", T, g)
        return dx, dg, dH

    out = {"x": [], "n": [], "grad_norm": [], "H": [], "theta_deg": [], "kappa": []}
    ts = [0.0]
    _emit(x, g, H, out)
    t = 0.0
    while t < t_end - 1e-13 * max(1.0, t_end):
        dt = min(dt_ref, t_end - t)
        t_new = t + dt
        k1 = rhs(t, x, g, H)
        k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1[0], g + 0.5 * dt * k1[1], H + 0.5 * dt * k1[2])
        k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2[0], g + 0.5 * dt * k2[1], H + 0.5 * dt * k2[2])
        k4 = rhs(t + dt, x + dt * k3[0], g + dt * k3[1], H + dt * k3[2])
        x = x + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        g = g + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        H = H + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        t = t_new
        ts.append(t)
        _emit(x, g, H, out)

    return ReferenceTrajectory(
        t=np.array(ts),
        x=np.array(out["x"]),
        n=np.array(out["n"]),
        grad_norm=np.array(out["grad_norm"]),
        H=np.array(out["H"]),
        theta_deg=np.array(out["theta_deg"]),
        kappa=np.array(out["kappa"]),
    )
