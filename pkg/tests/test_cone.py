import numpy as np
import pytest

from coneflow.chart import Jet, normal
from coneflow.cone import (ConeSpec, angular_second_form, boundary_sample,
                           conormal, convexity_check, sigma_A_nu_nu)
from coneflow.errors import BoundaryDomainError, NonConvexConeError
from coneflow.mesh import build_mesh


class TestConormal:
    def test_round_on_axis(self):
        w = conormal(ConeSpec.round(0.5), np.array([0.5, 0.0]))
        assert np.allclose(w, [0.75, 0.0], atol=1e-12)

    def test_round_other_axis(self):
        w = conormal(ConeSpec.round(0.5), np.array([0.0, 0.5]))
        assert np.allclose(w, [0.0, 0.75], atol=1e-12)

    def test_interior_point_rejected(self):
        with pytest.raises(BoundaryDomainError):
            conormal(ConeSpec.round(0.5), np.array([0.3, 0.0]))

    def test_round_conormal_is_radial(self):
        spec = ConeSpec.round(0.7)
        for th in np.linspace(0, 2 * np.pi, 17):
            x = 0.7 * np.array([np.cos(th), np.sin(th)])
            w = conormal(spec, x)
            cross = w[0] * x[1] - w[1] * x[0]
            assert abs(cross) < 1e-12

    def test_polar_conormal_nonzero(self):
        spec = ConeSpec.polar([0.5, 0.0, 0.04])
        th = 0.6
        x = float(spec.radius(th)) * np.array([np.cos(th), np.sin(th)])
        w = conormal(spec, x)
        assert np.linalg.norm(w) > 0.1


class TestAngularSecondForm:
    def test_ray_direction_is_flat(self):
        spec = ConeSpec.round(0.5)
        x = np.array([0.5, 0.0])
        ray = np.array([0.5, 0.0, 1.0]) / np.sqrt(0.75)
        assert sigma_A_nu_nu(spec, x, 1.0, ray) == pytest.approx(0.0, abs=1e-12)

    def test_angular_direction_height_one(self):
        spec = ConeSpec.round(0.5)
        x = np.array([0.5, 0.0])
        e_theta = np.array([0.0, 1.0, 0.0])
        # height-1 slice through x corresponds to u = sqrt(1 - rho^2)
        u1 = np.sqrt(0.75)
        val = sigma_A_nu_nu(spec, x, u1, e_theta)
        assert val == pytest.approx(2.309401, abs=1e-5)

    def test_height_scaling(self):
        spec = ConeSpec.round(0.5)
        x = np.array([0.5, 0.0])
        e_theta = np.array([0.0, 1.0, 0.0])
        u2 = 2.0 * np.sqrt(0.75)
        val = sigma_A_nu_nu(spec, x, u2, e_theta)
        assert val == pytest.approx(1.154701, abs=1e-5)

    def test_radial_surface_normal_gives_zero(self):
        spec = ConeSpec.round(0.5)
        x = np.array([0.5, 0.0])
        jet = Jet(x=x, u=1.3, du=np.zeros(2))
        # constant-height surface: normal has no angular component but
        # fails exact tangency only at roundoff
        val = sigma_A_nu_nu(spec, x, 1.3, normal(jet), tangency_tol=np.inf)
        assert abs(val) < 1e-24

    def test_non_tangent_vector_rejected(self):
        spec = ConeSpec.round(0.5)
        with pytest.raises(ValueError):
            sigma_A_nu_nu(spec, np.array([0.5, 0.0]), 1.0,
                          np.array([1.0, 0.0, 0.0]))

    def test_nonnegative_on_convex_cone(self):
        spec = ConeSpec.polar([0.5, 0.0, 0.04])
        mesh = build_mesh(spec, 16, 16)
        for bs in mesh.boundary_samples:
            assert bs.a_sigma_theta >= 0.0


class TestConvexity:
    def test_round(self):
        ok, rep = convexity_check(ConeSpec.round(0.5))
        assert ok
        assert rep["min_curvature"] == pytest.approx(2.0)

    def test_small_quadrupole_convex(self):
        spec = ConeSpec.polar([0.5, 0.0, 0.05])
        ok, rep = convexity_check(spec)
        # oracle: polar curvature formula on a fine grid
        th = np.linspace(0, 2 * np.pi, 8192, endpoint=False)
        r = 0.5 + 0.05 * np.cos(2 * th)
        d1 = -0.1 * np.sin(2 * th)
        d2 = -0.2 * np.cos(2 * th)
        kappa = (r * r + 2 * d1 * d1 - r * d2) / (r * r + d1 * d1) ** 1.5
        assert ok == bool(kappa.min() >= 0) == True  # noqa: E712
        assert rep["min_curvature"] == pytest.approx(kappa.min(), abs=1e-4)

    def test_large_quadrupole_not_convex(self):
        ok, rep = convexity_check(ConeSpec.polar([0.5, 0.0, 0.3]))
        assert not ok
        assert rep["min_curvature"] < 0

    def test_mesh_rejects_nonconvex(self):
        with pytest.raises(NonConvexConeError):
            build_mesh(ConeSpec.polar([0.5, 0.0, 0.3]), 16, 16)

    def test_all_round_radii_convex(self):
        for rho in (0.05, 0.3, 0.6, 0.95):
            ok, _ = convexity_check(ConeSpec.round(rho))
            assert ok


class TestSpecValidation:
    def test_round_radius_range(self):
        for bad in (0.0, 1.0, 1.2, -0.1):
            with pytest.raises(ValueError):
                ConeSpec.round(bad)

    def test_polar_radius_range(self):
        with pytest.raises(ValueError):
            ConeSpec.polar([0.9, 0.0, 0.2])   # exceeds the unit ball

    def test_boundary_sample_fields(self):
        spec = ConeSpec.round(0.5)
        bs = boundary_sample(spec, np.array([0.5, 0.0]))
        assert np.allclose(bs.gamma, [1.0, 0.0])
        assert np.allclose(bs.w, [0.75, 0.0])
        assert bs.a_sigma_theta == pytest.approx(
            angular_second_form(spec, np.array([0.5, 0.0])))
