import numpy as np
import pytest

from coneflow.chart import hyperbolic_cap_area
from coneflow.cone import ConeSpec
from coneflow.diagnostics import (DiagnosticsRecord, audit,
                                  boundary_residuals, fit_j_decay, record)
from coneflow.engine import StepControl, homothetic_trajectory
from coneflow.mesh import Field, build_mesh

ROUND = ConeSpec.round(0.5)


def homothetic_field(mesh, k, t):
    u = np.full(mesh.shape, np.sqrt(k * k + 2 * mesh.n * t))
    return Field(mesh=mesh, u=u, t=t)


class TestRecord:
    def test_homothetic_values(self):
        m = build_mesh(ROUND, 64, 64)
        for t in (0.0, 1.0, 25.0):
            r = record(homothetic_field(m, 1.0, t))
            assert r.f2_shift_min == pytest.approx(1.0, abs=1e-9)
            assert r.f2_shift_max == pytest.approx(1.0, abs=1e-9)
            assert r.j_max < 1e-20
            assert r.hf_min == pytest.approx(2.0, rel=1e-12)
            assert r.hf_max == pytest.approx(2.0, rel=1e-12)
            assert r.hsf2_min == pytest.approx(2.0, rel=1e-12)
            assert r.hsf2_max == pytest.approx(2.0, rel=1e-12)
            assert r.integral_residual < 1e-8
            assert r.osc_psi_u < 1e-10
            assert r.interior_a2f2_max == pytest.approx(2.0, abs=1e-6)

    def test_homothetic_psi_u_is_cap_radius(self):
        m = build_mesh(ROUND, 64, 64)
        R = hyperbolic_cap_area(0.5, 2) ** -0.5
        for t in (0.0, 4.0):
            r = record(homothetic_field(m, 1.0, t))
            assert r.psi_u_max == pytest.approx(R, abs=1e-3)
            assert r.psi * np.sqrt(1 + 4 * t) == pytest.approx(R, abs=1e-3)

    def test_mean_hf_at_most_n(self):
        m = build_mesh(ROUND, 32, 32)
        u = (1.0 + 0.08 * np.cos(np.pi * m.sigma))[:, None] * np.ones((1, 32))
        r = record(Field(mesh=m, u=u, t=0.0))
        assert r.mean_hf <= 2.0 + 1e-8
        assert r.mean_hf >= 2.0 / np.sqrt(1 + r.j_max) - 1e-8

    def test_schema_round_trip(self):
        m = build_mesh(ROUND, 16, 16)
        r = record(homothetic_field(m, 1.0, 0.5))
        d = r.to_dict()
        assert DiagnosticsRecord.from_dict(d) == r
        d.pop("area")
        with pytest.raises(ValueError):
            DiagnosticsRecord.from_dict(d)


class TestBoundaryResiduals:
    def test_homothetic_all_vanish(self):
        m = build_mesh(ROUND, 64, 64)
        r1, r2, r3 = boundary_residuals(homothetic_field(m, 1.0, 3.0))
        assert r1 < 1e-8 and r2 < 1e-8 and r3 < 1e-8

    def test_homothetic_axisymmetric(self):
        m = build_mesh(ConeSpec.round(0.5, n=3), 64, axisymmetric=True)
        r1, r2, r3 = boundary_residuals(homothetic_field(m, 1.0, 1.0))
        assert max(r1, r2, r3) < 1e-8

    def test_radial_field_residual_refines(self):
        vals = {}
        for nr in (16, 32):
            m = build_mesh(ROUND, nr, 16)
            u = (1.0 + 0.1 * np.cos(np.pi * m.sigma))[:, None] \
                * np.ones((1, 16))
            vals[nr] = boundary_residuals(Field(mesh=m, u=u, t=0.0))[0]
        assert vals[16] / vals[32] > 3.0

    def test_curvature_term_enters_rh(self):
        # with angular data the cone's second-form term is an O(1)
        # fraction of the raw conormal derivative of H
        from coneflow import kernels
        m = build_mesh(ROUND, 32, 32)
        xi = 2.0 * m.sigma ** 2 - m.sigma ** 4
        u = 1.0 + 0.05 * np.cos(2 * m.theta)[None, :] * xi[:, None]
        f = Field(mesh=m, u=u, t=0.0)
        f, *_ = kernels.advance_field(f, 0.05, 0.4, 1e-13, 1e9, 10)
        g = kernels.geometry_fields(f)
        # measure both pieces at the worst boundary node
        from coneflow.chart import Jet, normal
        from coneflow.cone import sigma_A_nu_nu
        du1, du2 = g["du1"], g["du2"]
        H = g["H"]
        best = 0.0
        for j, bs in enumerate(m.boundary_samples):
            jet = Jet(x=bs.x, u=float(f.u[-1, j]),
                      du=np.array([du1[-1, j], du2[-1, j]]))
            sig = sigma_A_nu_nu(m.spec, bs.x, jet.u, normal(jet),
                                tangency_tol=np.inf)
            best = max(best, abs(H[-1, j] * sig))
        assert best > 1e-4


class TestAudit:
    def make_homothetic_records(self, nr=32):
        m = build_mesh(ROUND, nr, nr)
        ctl = StepControl(t_end=16.0, snapshot_t0=0.25)
        traj = homothetic_trajectory(m, 1.0, ctl, diagnose=record)
        return [rec for _, rec in traj]

    def test_homothetic_all_pass(self):
        recs = self.make_homothetic_records()
        rep = audit(recs)
        assert rep.passed
        names = {c["name"] for c in rep.checks}
        assert {"envelope", "hs_hull", "j_bound", "mean_convexity",
                "hf_band", "psi_f_band", "osc_decay",
                "mean_hf_bracket"} <= names

    def test_injected_envelope_violation_detected(self):
        recs = self.make_homothetic_records()
        recs[3].f2_shift_max = recs[3].f2_shift_max + 1e-3
        rep = audit(recs)
        env = [c for c in rep.checks if c["name"] == "envelope"][0]
        assert not env["passed"]
        assert not rep.passed

    def test_injected_j_violation_detected(self):
        recs = self.make_homothetic_records()
        recs[2].j_max = 1.5   # above max(initial, n-1) = 1
        rep = audit(recs)
        jb = [c for c in rep.checks if c["name"] == "j_bound"][0]
        assert not jb["passed"]

    def test_needs_two_records(self):
        recs = self.make_homothetic_records()
        with pytest.raises(ValueError):
            audit(recs[:1])


class TestFit:
    def test_recovers_synthetic_log_decay(self):
        n = 2
        a, b = 3.7, 55.0
        t = np.geomspace(1e2, 1e6, 25)
        j = a / np.log(b + 2 * n * t)
        fit = fit_j_decay(t, j, n, t_min=1e2, t_max=1e6)
        assert fit["r2"] > 0.999999
        assert fit["a"] == pytest.approx(a, rel=1e-3)
        assert fit["b"] == pytest.approx(b, rel=0.15)

    def test_too_few_points(self):
        fit = fit_j_decay([1.0, 2.0], [0.1, 0.1], 2)
        assert fit["r2"] == 0.0 and np.isnan(fit["a"])

    def test_window_selection(self):
        t = np.geomspace(1.0, 1e6, 40)
        j = 2.0 / np.log(10 + 4 * t)
        fit = fit_j_decay(t, j, 2, t_min=1e2, t_max=1e6)
        assert fit["n_points"] == int(np.sum((t >= 1e2) & (t <= 1e6)))
