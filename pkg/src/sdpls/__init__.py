"""Signed-distance-preserving level set advection (SDPLS) on Cartesian grids.

The classical level set advection equation loses the signed distance
property |grad phi| = 1 away from t = 0, even at the interface itself. This
package transports the level set with an added source term proportional to
the local rate of interfacial area generation, which preserves |grad phi|
at the zero contour exactly on the continuous level, keeps the zero contour
motion unchanged, and needs no boundary condition at a moving contact line.
A first-order donor-cell upwind discretization integrates the per-step
linearized equation; an independent method-of-characteristics oracle and a
mesh-refinement harness quantify the accuracy of contact-point position,
contact angle, curvature, and gradient norm.
"""

from .config import ConfigError, SolverConfig, parse_config
from .diagnostics import (
    ContactProbe,
    ContactRecord,
    contact_angle,
    contact_curvature,
    contact_grad_norm,
    find_contact_point,
    max_sdf_deviation,
)
from .grid import (
    Grid,
    ScalarField,
    TensorField,
    VectorField,
    curvature,
    divergence,
    gradient,
    make_grid,
    sample_bilinear,
    signed_distance_sphere,
)
from .harness import (
    ConvergenceReport,
    observed_orders,
    run_case,
    run_convergence,
    write_vtk_snapshot,
)
from .oracle import ReferenceTrajectory, initial_hessian_sphere, integrate_reference
from .solver import (
    RunResult,
    SolverInstabilityError,
    SolverState,
    SourceParams,
    StepControl,
    compute_dt,
    fill_inflow_ghosts,
    mollifier,
    run,
    source_field,
    step,
    upwind_rhs,
)
from .velocity import (
    CATALOG,
    AnalyticVelocity,
    FieldValidationReport,
    make_velocity,
    sample_lattice,
    validate,
)

__version__ = "0.1.0"
