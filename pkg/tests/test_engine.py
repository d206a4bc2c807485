import numpy as np
import pytest

from coneflow.cone import ConeSpec
from coneflow.engine import (ParabolicityReport, StepControl,
                             homothetic_height, homothetic_trajectory, rhs,
                             run, run_axisymmetric, stable_dt, step)
from coneflow.errors import SpacelikeViolationError, StiffnessError
from coneflow.mesh import Field, build_mesh

ROUND = ConeSpec.round(0.5)


def const_field(mesh, k, t=0.0):
    return Field(mesh=mesh, u=np.full(mesh.shape, float(k)), t=t)


class TestRhs:
    def test_constant_field_n2(self):
        m = build_mesh(ROUND, 16, 16)
        vals, hr = rhs(const_field(m, 1.0))
        assert np.abs(vals - 2.0).max() < 1e-10
        assert np.abs(hr - 2.0).max() < 1e-10

    def test_scaling_n_over_k(self):
        m = build_mesh(ROUND, 16, 16)
        for k in (0.5, 3.0):
            vals, _ = rhs(const_field(m, k))
            assert np.abs(vals - 2.0 / k).max() < 1e-10

    def test_curvature_readout_matches_shape_operator(self):
        from coneflow.mesh import jet_at
        from coneflow.chart import shape_operator
        m = build_mesh(ROUND, 24, 16)
        u = (1.0 + 0.05 * np.cos(np.pi * m.sigma))[:, None] * np.ones((1, 16))
        f = Field(mesh=m, u=u, t=0.0)
        _, hr = rhs(f)
        for (i, j) in ((3, 0), (10, 5), (20, 11)):
            H, _ = shape_operator(jet_at(f, i, j))
            assert hr[i, j] == pytest.approx(H, rel=1e-12)

    def test_nonspacelike_aborts_with_location(self):
        m = build_mesh(ROUND, 16, 16)
        u = 1.0 + 0.9 * np.cos(np.pi * m.sigma)[:, None] * np.ones((1, 16))
        with pytest.raises(SpacelikeViolationError):
            rhs(Field(mesh=m, u=u, t=0.0))


class TestStableDt:
    def test_u_scaling(self):
        m = build_mesh(ROUND, 16, 16)
        ctl = StepControl(t_end=1.0, dt_max=1e12)
        ratio = stable_dt(const_field(m, 10.0), ctl) \
            / stable_dt(const_field(m, 1.0), ctl)
        assert ratio == pytest.approx(100.0, rel=1e-9)

    def test_mesh_scaling(self):
        ctl = StepControl(t_end=1.0, dt_max=1e12)
        dts = {nr: stable_dt(const_field(build_mesh(ROUND, nr, nr), 1.0), ctl)
               for nr in (16, 32)}
        assert dts[16] / dts[32] == pytest.approx(4.0, rel=0.2)

    def test_near_null_field_is_stiff(self):
        m = build_mesh(ROUND, 16, 16, axisymmetric=True)
        # steep spacelike-marginal data: v^2 positive but tiny
        u = 1.0 + 0.169 * np.cos(np.pi * m.sigma)
        f = Field(mesh=m, u=u, t=0.0)
        ctl = StepControl(t_end=1.0, dt_min=1e-5)
        with pytest.raises(StiffnessError) as exc:
            stable_dt(f, ctl)
        assert exc.value.report is not None
        assert exc.value.report.max_inv_v2 > 10.0


class TestStep:
    def test_zero_dt_identity(self):
        m = build_mesh(ROUND, 16, 16)
        f = const_field(m, 1.0)
        g = step(f, 0.0)
        assert np.array_equal(g.u, f.u)

    def test_single_step_matches_exact_expansion(self):
        m = build_mesh(ROUND, 16, 16)
        g = step(const_field(m, 1.0), 1e-4)
        exact = homothetic_height(1.0, 2, 1e-4)
        assert np.abs(g.u - exact).max() < 1e-11

    def test_fixed_step_global_error_second_order(self):
        m = build_mesh(ROUND, 16, axisymmetric=True)
        errs = []
        for dt in (2e-3, 1e-3):
            f = const_field(m, 1.0)
            nsteps = int(round(0.4 / dt))
            for _ in range(nsteps):
                f = step(f, dt)
            errs.append(np.abs(f.u - homothetic_height(1.0, 2, f.t)).max())
        assert errs[0] / errs[1] >= 3.5


class TestRun:
    def test_homothetic_run_and_parabolicity(self):
        m = build_mesh(ROUND, 16, 16)
        ctl = StepControl(t_end=2.0, safety=0.4, snapshot_t0=0.5)
        traj = run(const_field(m, 1.0), ctl)
        times = [f.t for f, _ in traj]
        assert times[0] == 0.0 and times[-1] == 2.0
        for f, _ in traj:
            exact = homothetic_height(1.0, 2, f.t)
            assert np.abs(f.u / exact - 1.0).max() < 1e-7
            rep = ParabolicityReport.from_field(f)
            assert rep.min_v > 0 and np.isfinite(rep.max_u2)

    def test_rejects_nonspacelike_initial_data(self):
        m = build_mesh(ROUND, 16, 16)
        u = 1.0 + 0.9 * np.cos(np.pi * m.sigma)[:, None] * np.ones((1, 16))
        with pytest.raises(SpacelikeViolationError):
            run(Field(mesh=m, u=u, t=0.0), StepControl(t_end=0.1))

    def test_comparison_principle_probe_1d(self):
        m = build_mesh(ROUND, 64, axisymmetric=True)
        ctl = StepControl(t_end=1.0, safety=0.4, snapshot_t0=0.125)
        lo = Field(mesh=m, u=1.0 + 0.05 * np.cos(np.pi * m.sigma), t=0.0)
        hi = Field(mesh=m, u=1.08 + 0.05 * np.cos(np.pi * m.sigma), t=0.0)
        ta = run_axisymmetric(lo, ctl)
        tb = run_axisymmetric(hi, ctl)
        for (fa, _), (fb, _) in zip(ta, tb):
            assert np.all(fa.u <= fb.u + 1e-12)

    def test_comparison_principle_probe_2d(self):
        m = build_mesh(ROUND, 16, 16)
        ctl = StepControl(t_end=0.25, safety=0.4, snapshot_t0=0.05)
        lo = const_field(m, 1.0)
        u = 1.06 + 0.05 * np.cos(np.pi * m.sigma)[:, None] * np.ones((1, 16))
        hi = Field(mesh=m, u=u, t=0.0)
        ta = run(lo, ctl)
        tb = run(hi, ctl)
        for (fa, _), (fb, _) in zip(ta, tb):
            assert np.all(fa.u <= fb.u + 1e-12)


class TestAxisymmetric:
    def test_identical_to_2d_on_constant_data(self):
        # same pointwise code path: with a matched step sequence the two
        # solvers agree to roundoff; adaptive runs differ only through
        # their step-size policies (temporal error level)
        m2 = build_mesh(ROUND, 32, 32)
        m1 = build_mesh(ROUND, 32, axisymmetric=True)
        f2, f1 = const_field(m2, 1.0), const_field(m1, 1.0)
        for _ in range(100):
            f2 = step(f2, 2e-5)
            f1 = step(f1, 2e-5)
        assert f2.t == f1.t
        assert np.abs(f2.u[:, 0] - f1.u).max() < 1e-12
        ctl = StepControl(t_end=1.0, safety=0.4, snapshot_t0=0.5)
        t2 = run(const_field(m2, 1.0), ctl)
        t1 = run_axisymmetric(const_field(m1, 1.0), ctl)
        for (a, _), (b, _) in zip(t2, t1):
            assert np.abs(a.u[:, 0] - b.u).max() < 1e-8

    def test_radial_data_cross_validation(self):
        m2 = build_mesh(ROUND, 32, 32)
        m1 = build_mesh(ROUND, 32, axisymmetric=True)
        prof = 1.0 + 0.08 * np.cos(np.pi * m1.sigma)
        ctl = StepControl(t_end=1.0, safety=0.4, snapshot_t0=1.0)
        f2 = run(Field(mesh=m2, u=prof[:, None] * np.ones((1, 32)), t=0.0),
                 ctl)[-1][0]
        f1 = run_axisymmetric(Field(mesh=m1, u=prof.copy(), t=0.0),
                              ctl)[-1][0]
        assert np.abs(f2.u[:, 0] - f1.u).max() < 1e-3

    def test_n3_exact_height(self):
        m = build_mesh(ConeSpec.round(0.5, n=3), 64, axisymmetric=True)
        ctl = StepControl(t_end=1.0, safety=0.4, snapshot_t0=1.0)
        f = run_axisymmetric(const_field(m, 1.0), ctl)[-1][0]
        assert np.abs(f.u - np.sqrt(7.0)).max() < 1e-4

    def test_requires_axisymmetric_mesh(self):
        m = build_mesh(ROUND, 16, 16)
        with pytest.raises(ValueError):
            run_axisymmetric(const_field(m, 1.0), StepControl(t_end=0.1))


class TestHomotheticTrajectory:
    def test_heights(self):
        m = build_mesh(ROUND, 16, 16)
        ctl = StepControl(t_end=4.0, snapshot_t0=1.0)
        traj = homothetic_trajectory(m, 1.0, ctl)
        for f, _ in traj:
            assert np.allclose(f.u, homothetic_height(1.0, 2, f.t))
