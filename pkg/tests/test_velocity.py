import numpy as np
import pytest

from sdpls.velocity import (
    CATALOG,
    Linear3D,
    make_velocity,
    sample_lattice,
    validate,
)

# rotation2d cannot be tangential to a straight wall, so the impermeability
# checks cover the remaining catalog.
WALL_FIELDS = ("vortex_box", "time_periodic", "linear3d", "translation")


def _random_points(v, rng, n=100):
    x = rng.uniform(0.05, 0.95, size=(n, v.dim))
    t = rng.uniform(0.0, 1.0, size=n)
    return t, x


def test_vortex_stagnation_point():
    v = make_velocity("vortex_box")
    np.testing.assert_allclose(v.eval(0.0, (0.5, 0.5)), 0.0, atol=1e-15)


def test_wall_normal_component_vanishes():
    rng = np.random.default_rng(3)
    for fid in WALL_FIELDS:
        v = make_velocity(fid)
        pts = rng.uniform(0.0, 1.0, size=(50, v.dim))
        pts[:, 1] = 0.0
        for t in (0.0, 0.13, 0.9):
            assert np.max(np.abs(v.eval(t, pts)[:, 1])) <= 1e-14


def test_translation_returns_constant_vector():
    v = make_velocity("translation", cx=0.7)
    np.testing.assert_allclose(v.eval(2.0, (0.1, 0.9)), [0.7, 0.0], rtol=1e-15)


def test_linear3d_gradient_rows_and_trace():
    v = Linear3D()
    J = v.eval_gradient(0.0, (0.3, 0.2, 0.7))
    np.testing.assert_allclose(J[0], [0.1, 0.1, -0.2], rtol=1e-15)
    np.testing.assert_allclose(J[1], [0.0, -0.2, 0.0], atol=1e-15)
    np.testing.assert_allclose(J[2], [0.3, -0.1, 0.1], rtol=1e-15)
    assert abs(np.trace(J)) <= 1e-15


def test_rotation2d_gradient_is_antisymmetric():
    v = make_velocity("rotation2d", omega=0.8)
    J = v.eval_gradient(0.0, (0.2, 0.4))
    np.testing.assert_allclose(J, [[0.0, -0.8], [0.8, 0.0]], atol=1e-15)


def test_vortex_gradient_at_origin():
    v = make_velocity("vortex_box")  # v0 = -0.2
    J = v.eval_gradient(0.0, (0.0, 0.0))
    np.testing.assert_allclose(J, [[0.2 * np.pi, 0.0], [0.0, -0.2 * np.pi]], atol=1e-14)


def test_hessians_of_affine_fields_vanish():
    for fid in ("time_periodic", "linear3d", "translation", "rotation2d"):
        v = make_velocity(fid)
        T = v.eval_hessian(0.3, np.full(v.dim, 0.4))
        np.testing.assert_allclose(T, 0.0, atol=1e-15)


def test_vortex_hessian_component():
    v = make_velocity("vortex_box")
    x, y = 0.3, 0.2
    T = v.eval_hessian(0.0, (x, y))
    expected = -0.2 * np.pi**2 * np.sin(np.pi * x) * np.cos(np.pi * y)
    assert T[0, 0, 0] == pytest.approx(expected, rel=1e-13)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    step = 1e-5
    for fid in CATALOG:
        v = make_velocity(fid)
        t, x = _random_points(v, rng)
        for k in range(len(t)):
            J = v.eval_gradient(t[k], x[k])
            for j in range(v.dim):
                e = np.zeros(v.dim)
                e[j] = step
                fd = (v.eval(t[k], x[k] + e) - v.eval(t[k], x[k] - e)) / (2 * step)
                np.testing.assert_allclose(J[:, j], fd, rtol=1e-6, atol=1e-9)


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(13)
    step = 1e-5
    for fid in CATALOG:
        v = make_velocity(fid)
        t, x = _random_points(v, rng)
        for k in range(len(t)):
            T = v.eval_hessian(t[k], x[k])
            for i in range(v.dim):
                e = np.zeros(v.dim)
                e[i] = step
                fd = (v.eval_gradient(t[k], x[k] + e) - v.eval_gradient(t[k], x[k] - e)) / (2 * step)
                # fd approximates d_i J with J[k, j] = d_j v_k => compare T[i, j, k]
                np.testing.assert_allclose(T[i], fd.T, rtol=1e-6, atol=1e-8)


def test_gradient_trace_vanishes_everywhere():
    rng = np.random.default_rng(17)
    for fid in CATALOG:
        v = make_velocity(fid)
        t, x = _random_points(v, rng)
        J = v.eval_gradient(0.0, x)
        assert np.max(np.abs(np.trace(J, axis1=-2, axis2=-1))) <= 1e-12


def test_validate_vortex_on_lattice():
    v = make_velocity("vortex_box")
    report = validate(v, sample_lattice(2, 50))
    assert report.max_abs_divergence <= 1e-12
    assert report.max_abs_wall_normal_velocity <= 1e-12


def test_validate_periodic_at_half_period():
    v = make_velocity("time_periodic")
    pts = sample_lattice(2, 20)
    assert np.max(np.abs(v.eval(0.2, pts))) <= 1e-14  # cos(pi/2) = 0
    report = validate(v, pts, times=(0.2,))
    assert report.max_abs_divergence <= 1e-14
    assert report.max_abs_wall_normal_velocity <= 1e-14


def test_validate_linear3d():
    v = make_velocity("linear3d")
    bounds = [(0, 2), (0, 0.6), (0, 2)]
    report = validate(v, sample_lattice(3, 12, bounds))
    assert report.max_abs_divergence <= 1e-13
    assert report.max_abs_wall_normal_velocity <= 1e-13


def test_validate_rejects_empty_samples():
    v = make_velocity("vortex_box")
    with pytest.raises(ValueError, match="non-empty"):
        validate(v, np.zeros((0, 2)))


def test_unknown_field_and_parameter():
    with pytest.raises(ValueError, match="unknown velocity field id"):
        make_velocity("spiral")
    with pytest.raises(ValueError, match="unknown parameter"):
        make_velocity("vortex_box", v1=2.0)
