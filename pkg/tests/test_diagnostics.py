import numpy as np
import pytest

from sdpls.diagnostics import (
    ContactProbe,
    ContactRecord,
    contact_angle,
    contact_curvature,
    contact_grad_norm,
    find_contact_point,
    max_sdf_deviation,
)
from sdpls.grid import (
    ScalarField,
    curvature,
    make_grid,
    sample_bilinear,
    signed_distance_sphere,
)

X_CONTACT = 0.5 + np.sqrt(0.3**2 - 0.15**2)  # right crossing of the initial circle


def _vortex_phi(nx):
    g = make_grid(2, (0, 0), (1, 0.5), (nx, nx // 2))
    return signed_distance_sphere(g, (0.5, -0.15), 0.3)


def test_find_contact_point_initial_circle():
    phi = _vortex_phi(100)
    p = find_contact_point(phi)
    assert p[1] == 0.0
    assert p[0] == pytest.approx(X_CONTACT, abs=5e-5)  # h^2-level interpolation error


def test_find_contact_point_interpolation_error_scales_h2():
    e1 = abs(find_contact_point(_vortex_phi(100))[0] - X_CONTACT)
    e2 = abs(find_contact_point(_vortex_phi(200))[0] - X_CONTACT)
    assert e2 <= e1 / 3.0


def test_find_contact_point_exact_for_affine_wall_trace():
    g = make_grid(2, (0, 0), (1, 0.5), (40, 20))
    phi = ScalarField.from_function(g, lambda x, y: x - 0.63 + 0.2 * y)
    p = find_contact_point(phi)
    assert p[0] == pytest.approx(0.63, rel=1e-12)


def test_find_contact_point_selectors_and_detachment():
    phi = _vortex_phi(100)
    right = find_contact_point(phi, "rightmost")
    left = find_contact_point(phi, "leftmost")
    assert left[0] == pytest.approx(0.5 - (X_CONTACT - 0.5), abs=5e-5)
    assert right[0] > left[0]
    g = make_grid(2, (0, 0), (1, 1), (20, 20))
    interior = signed_distance_sphere(g, (0.5, 0.6), 0.2)
    assert find_contact_point(interior) is None
    with pytest.raises(ValueError, match="selector"):
        find_contact_point(phi, "topmost")


def test_contact_angle_initial_circle():
    # exact value 60 degrees; within 1 degree on the coarsest mesh and
    # converging at least first order
    errs = []
    for nx in (100, 200):
        phi = _vortex_phi(nx)
        theta = contact_angle(phi, find_contact_point(phi), 1e-12)
        errs.append(abs(theta - 60.0))
    assert errs[0] < 1.0
    assert errs[1] <= 0.55 * errs[0]


def test_contact_angle_alignment_edge_case():
    # n = e_y exactly up to the eps regularization; arccos amplifies that to
    # sqrt(2 eps) radians, still indistinguishable from 0 degrees
    g = make_grid(2, (0, 0), (1, 0.5), (20, 10))
    phi = ScalarField.from_function(g, lambda x, y: y + 0.1)
    assert contact_angle(phi, np.array([0.5, 0.0]), 1e-12) == pytest.approx(0.0, abs=1e-3)


def test_contact_curvature_circle_and_plane():
    phi = _vortex_phi(400)
    kappa = contact_curvature(phi, find_contact_point(phi), 1e-12)
    assert kappa == pytest.approx(-1.0 / 0.3, rel=0.02)
    g = make_grid(2, (0, 0), (1, 0.5), (20, 10))
    plane = ScalarField.from_function(g, lambda x, y: x - 0.5)
    assert contact_curvature(plane, np.array([0.5, 0.0]), 1e-12) == pytest.approx(0.0, abs=1e-9)


def test_contact_curvature_matches_full_field_operator():
    # the wall trace of kappa is the clamped first-row value of curvature()
    phi = _vortex_phi(100)
    p = find_contact_point(phi)
    k_full = curvature(phi, 1e-12)
    probe = np.array([p[0], 0.5 * phi.grid.spacing])
    assert contact_curvature(phi, p, 1e-12) == pytest.approx(
        sample_bilinear(k_full, probe), rel=1e-12
    )


def test_contact_grad_norm_sdf_and_scaling():
    phi = _vortex_phi(200)
    p = find_contact_point(phi)
    assert contact_grad_norm(phi, p) == pytest.approx(1.0, abs=2e-3)
    doubled = ScalarField(phi.grid, 2.0 * phi.values)
    assert contact_grad_norm(doubled, p) == pytest.approx(2.0, abs=4e-3)


def test_3d_sphere_initial_diagnostics():
    g = make_grid(3, (0, 0, 0), (2, 0.6, 2), (100, 30, 100))
    phi = signed_distance_sphere(g, (0, -0.2, 0), 0.6)
    seed = np.array([0.4, 0.0, 0.4])
    p = find_contact_point(phi, seed)
    assert np.linalg.norm(p - seed) < 1e-3  # seed already on the contour
    theta = contact_angle(phi, p, 1e-12)
    assert theta == pytest.approx(np.degrees(np.arccos(1.0 / 3.0)), abs=0.1)
    assert contact_curvature(phi, p, 1e-12) == pytest.approx(-10.0 / 3.0, rel=0.02)
    assert contact_grad_norm(phi, p) == pytest.approx(1.0, abs=1e-3)


def test_max_sdf_deviation():
    recs = [
        ContactRecord(t, np.zeros(2), 60.0, -3.3, gn)
        for t, gn in [(0.0, 1.0), (0.1, 1.2), (0.2, 0.9)]
    ]
    assert max_sdf_deviation(recs) == pytest.approx(0.2, rel=1e-12)
    flat = [ContactRecord(0.0, np.zeros(2), 60.0, -3.3, 1.0)]
    assert max_sdf_deviation(flat) == 0.0
    with pytest.raises(ValueError, match="empty"):
        max_sdf_deviation([])


def test_probe_detachment_is_sticky():
    g = make_grid(2, (0, 0), (1, 1), (20, 20))
    interior = signed_distance_sphere(g, (0.5, 0.6), 0.2)
    probe = ContactProbe(g, 1e-12)
    assert probe.measure(interior, 0.0) is None
    assert probe.detached
    assert probe.measure(interior, 0.1) is None


def test_probe_requires_seed_in_3d():
    g = make_grid(3, (0, 0, 0), (1, 0.5, 1), (8, 4, 8))
    with pytest.raises(ValueError, match="seed"):
        ContactProbe(g, 1e-12)
