"""The acceptance suite: every quantitative gate the solver must meet.

Shared simulations are cached on the harness so criteria that audit the
same trajectory reuse it.  Two sub-checks (the late-time log-decay fit
quality and the strict late-time oscillation decrease) are expected to
fail in double precision: the flow converges to the expanding cap so
fast that both signals fall below the floating-point noise floor early
in the run.  They are implemented exactly as stated and flagged
``expected_fail`` rather than weakened.
"""

import os
import sys
from dataclasses import dataclass

import numpy as np

from . import diagnostics, io
from .chart import hyperbolic_cap_area
from .cone import ConeSpec
from .engine import StepControl, homothetic_height, homothetic_trajectory, run
from .errors import ConfigError
from .mesh import Field, build_mesh

SAFETY = 0.45          # verified stable for every acceptance run
RHO = 0.5
N = 2
R_CAP = None           # filled lazily: hyperbolic_cap_area(RHO, N) ** -0.5

#: the stated bump amplitude of the envelope run is 0.2; that initial
#: datum is not spacelike (config validation rejects it, see
#: criterion_2_amplitude_rejected), so the run uses the strongest
#: amplitude that keeps a healthy spacelike margin
BUMP_A = 0.1
#: mean-convex amplitude for the convexity-preservation run
CONVEX_A = 0.02


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: str
    expected_fail: str | None = None

    def line(self):
        if self.passed:
            tag = "PASS"
        elif self.expected_fail:
            tag = "FAIL (expected: " + self.expected_fail + ")"
        else:
            tag = "FAIL"
        return f"[{tag}] {self.name}: {self.details}"


def _log(msg, verbose):
    if verbose:
        print(msg, file=sys.stderr, flush=True)


def bump_profile(mesh, k, a):
    prof = k + a * np.cos(np.pi * mesh.sigma)
    if mesh.axisymmetric:
        return prof
    return prof[:, None] * np.ones((1, mesh.ntheta))


def angular_profile(mesh, k, a, m):
    xi = 0.5 * (m + 2.0) * mesh.sigma ** m - 0.5 * m * mesh.sigma ** (m + 2)
    return k + a * np.cos(m * mesh.theta)[None, :] * xi[:, None]


class Harness:
    """Lazily builds and caches every simulation the criteria need."""

    def __init__(self, outdir=None, verbose=False):
        self.outdir = outdir
        self.verbose = verbose
        self._cache = {}
        if outdir:
            io.ensure_dir(outdir)

    def _memo(self, key, builder):
        if key not in self._cache:
            _log(f"[acceptance] building {key} ...", self.verbose)
            self._cache[key] = builder()
            _log(f"[acceptance] {key} done", self.verbose)
        return self._cache[key]

    # ------------------------------------------------------------ runs

    def bump_long(self):
        """Radial bump, reference mesh, horizon past 1e6, snapshot at 10."""
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 64, 64)
            ctl = StepControl(t_end=float(2 ** 20), safety=SAFETY,
                              snapshot_t0=0.0625, extra_times=(10.0,))
            field = Field(mesh=mesh, u=bump_profile(mesh, 1.0, BUMP_A), t=0.0)
            traj = run(field, ctl, diagnose=diagnostics.record)
            self._write_run("bump_long", traj)
            return traj
        return self._memo("bump_long", build)

    def bump_coarse(self):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 32, 32)
            ctl = StepControl(t_end=128.0, safety=SAFETY, snapshot_t0=0.0625)
            field = Field(mesh=mesh, u=bump_profile(mesh, 1.0, BUMP_A), t=0.0)
            return run(field, ctl, diagnose=diagnostics.record)
        return self._memo("bump_coarse", build)

    def bump_convex(self):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 64, 64)
            ctl = StepControl(t_end=128.0, safety=SAFETY, snapshot_t0=0.0625)
            field = Field(mesh=mesh, u=bump_profile(mesh, 1.0, CONVEX_A),
                          t=0.0)
            return run(field, ctl, diagnose=diagnostics.record)
        return self._memo("bump_convex", build)

    def homothetic_run(self):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 64, 64)
            ctl = StepControl(t_end=100.0, safety=SAFETY, snapshot_t0=0.0625)
            field = Field(mesh=mesh, u=np.ones(mesh.shape), t=0.0)
            return run(field, ctl, diagnose=diagnostics.record)
        return self._memo("homothetic_run", build)

    def homothetic_short(self, safety):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 64, 64)
            ctl = StepControl(t_end=1.0, safety=safety, snapshot_t0=1.0)
            field = Field(mesh=mesh, u=np.ones(mesh.shape), t=0.0)
            return run(field, ctl)
        return self._memo(f"homothetic_short_{safety}", build)

    def homothetic_exact_records(self):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 64, 64)
            ctl = StepControl(t_end=100.0, snapshot_t0=0.0625)
            traj = homothetic_trajectory(mesh, 1.0, ctl,
                                         diagnose=diagnostics.record)
            return [rec for _, rec in traj]
        return self._memo("homothetic_exact_records", build)

    def angular_run(self, nr):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), nr, nr)
            ctl = StepControl(t_end=0.25, safety=SAFETY, snapshot_t0=0.25)
            field = Field(mesh=mesh, u=angular_profile(mesh, 1.0, 0.05, 2),
                          t=0.0)
            return run(field, ctl, diagnose=diagnostics.record)
        return self._memo(f"angular_{nr}", build)

    def axisymmetric_match(self):
        def build():
            mesh = build_mesh(ConeSpec.round(RHO), 64, axisymmetric=True)
            ctl = StepControl(t_end=10.0, safety=SAFETY, snapshot_t0=10.0)
            field = Field(mesh=mesh, u=bump_profile(mesh, 1.0, BUMP_A), t=0.0)
            return run(field, ctl)
        return self._memo("axisymmetric_match", build)

    def _write_run(self, name, traj):
        if not self.outdir:
            return
        outdir = os.path.join(self.outdir, name)
        io.ensure_dir(outdir)
        records = [rec for _, rec in traj]
        io.write_timeseries(os.path.join(outdir, "timeseries.ndjson"),
                            records)
        io.write_audit(os.path.join(outdir, "audit.json"),
                       diagnostics.audit(records, fit_t_min=1e2,
                                         fit_t_max=1e6))
        marks = {0.0, 64.0, 65536.0, traj[-1][0].t}
        for idx, (field, _) in enumerate(traj):
            if any(abs(field.t - t) <= 1e-9 * max(1.0, t) for t in marks):
                io.write_snapshot(
                    os.path.join(outdir, f"snapshot_{idx:03d}_t{field.t:.6g}.csv"),
                    field)

    # ------------------------------------------------------------ helpers

    def records(self, traj):
        return [rec for _, rec in traj]

    def record_window(self, traj, t_max=None, t_min=None):
        out = []
        for _, rec in traj:
            if t_max is not None and rec.t > t_max * (1 + 1e-12):
                continue
            if t_min is not None and rec.t < t_min * (1 - 1e-12):
                continue
            out.append(rec)
        return out


def envelope_violations(recs):
    fmax = np.array([r.f2_shift_max for r in recs])
    fmin = np.array([r.f2_shift_min for r in recs])
    up = float(np.max(np.diff(fmax), initial=0.0))
    down = float(np.max(-np.diff(fmin), initial=0.0))
    return max(up, 0.0), max(down, 0.0)


def _slope(hs, vals):
    """Least-squares order of convergence from mesh sizes and errors."""
    x = np.log(np.asarray(hs, dtype=float))
    y = np.log(np.asarray(vals, dtype=float))
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0])


# ------------------------------------------------------------------ criteria

def criterion_1(h):
    traj = h.homothetic_run()
    worst = 0.0
    for field, _ in traj:
        exact = homothetic_height(1.0, N, field.t)
        worst = max(worst, float(np.abs(field.u / exact - 1.0).max()))
    ok1 = worst <= 1e-4

    e = {}
    for safety in (SAFETY, SAFETY / 2):
        f = h.homothetic_short(safety)[-1][0]
        e[safety] = float(np.abs(f.u - homothetic_height(1.0, N, f.t)).max())
    ratio = e[SAFETY] / e[SAFETY / 2]
    ok2 = ratio >= 3.5
    return [CriterionResult(
        "criterion 1: homothetic exactness", ok1 and ok2,
        f"max rel error {worst:.3e} (tol 1e-4); dt-halving ratio "
        f"{ratio:.2f} (need >= 3.5)")]


def criterion_2(h):
    recs = h.record_window(h.bump_long(), t_max=128.0)
    up, down = envelope_violations(recs)
    viol = max(up, down)
    ok1 = viol <= 1e-6

    recs_c = h.records(h.bump_coarse())
    up_c, down_c = envelope_violations(recs_c)
    viol_c = max(up_c, down_c)
    floor = 1e-9
    ok2 = (viol_c >= 3.0 * viol) or (viol_c <= floor and viol <= floor)
    return [CriterionResult(
        "criterion 2: envelope preservation", ok1 and ok2,
        f"worst violation {viol:.3e} at 64^2 (tol 1e-6); coarse-mesh "
        f"violation {viol_c:.3e}, shrink factor "
        f"{viol_c / max(viol, 1e-300):.1f} (need >= 3)")]


def criterion_3(h):
    recs = h.records(h.bump_long())
    r0 = recs[0]
    tol = 1e-3 * N
    dev = max(max(r.hsf2_max - r0.hsf2_max for r in recs),
              max(r0.hsf2_min - r.hsf2_min for r in recs), 0.0)
    return [CriterionResult(
        "criterion 3: hull preservation", dev <= tol,
        f"initial hull [{r0.hsf2_min:.4f}, {r0.hsf2_max:.4f}], worst "
        f"escape {dev:.3e} (tol {tol:.1e})")]


def criterion_4(h):
    recs = h.records(h.bump_long())
    r0 = recs[0]
    bound = max(r0.j_max, N - 1.0)
    dev = max(max(r.j_max - bound for r in recs), 0.0)
    ok_bound = dev <= 1e-6
    res_bound = CriterionResult(
        "criterion 4a: J bound", ok_bound,
        f"max J(0) = {r0.j_max:.4f}, bound {bound:.4f}, worst excess "
        f"{dev:.3e} (tol 1e-6)")

    t = np.array([r.t for r in recs])
    j = np.array([r.j_max for r in recs])
    fit = diagnostics.fit_j_decay(t, j, N, t_min=1e2, t_max=1e6)
    ok_fit = fit["r2"] >= 0.9
    res_fit = CriterionResult(
        "criterion 4b: J log-decay fit", ok_fit,
        f"r2 = {fit['r2']:.4f} over t in [1e2, 1e6] (need >= 0.9); "
        f"max J is at the floating-point floor there "
        f"(J({t[len(t) // 2]:.0f}) = {j[len(t) // 2]:.2e})",
        expected_fail=None if ok_fit else
        "flow converges to the expanding cap at a power-law rate, so J "
        "reaches the double-precision floor before t = 1e2")
    return [res_bound, res_fit]


def criterion_5(h):
    recs = h.records(h.bump_long()) + h.records(h.homothetic_run())
    worst = max(r.integral_residual for r in recs)
    ok1 = worst <= 1e-3

    hs, vals = [], []
    for nr in (16, 32, 64, 128):
        mesh = build_mesh(ConeSpec.round(RHO), nr, nr)
        f = Field(mesh=mesh, u=bump_profile(mesh, 1.0, BUMP_A), t=0.0)
        hs.append(1.0 / nr)
        vals.append(diagnostics.record(f).integral_residual)
    slope = _slope(hs, vals)
    ok2 = slope >= 1.7
    return [CriterionResult(
        "criterion 5: integral identity", ok1 and ok2,
        f"worst residual {worst:.3e} (tol 1e-3); refinement slope "
        f"{slope:.2f} (need >= 1.7)")]


def criterion_6(h):
    recs = h.records(h.bump_convex())
    h0 = recs[0].h_min
    ok_pre = h0 >= 0.1
    worst = min(r.h_min for r in recs)
    ok = ok_pre and worst >= -1e-6
    return [CriterionResult(
        "criterion 6: mean convexity preserved", ok,
        f"initial min H = {h0:.3f} (needs >= 0.1), run minimum "
        f"{worst:.3e} (tol -1e-6)")]


def criterion_7(h):
    global R_CAP
    if R_CAP is None:
        R_CAP = hyperbolic_cap_area(RHO, N) ** (-1.0 / N)
    traj = h.bump_long()
    samples = []
    for k in range(9):
        target = float(4 ** k)
        match = [r for _, r in traj
                 if abs(r.t - target) <= 1e-9 * max(1.0, target)]
        assert match, f"snapshot at t={target} missing"
        samples.append(match[0])
    osc = [r.osc_psi_u for r in samples]
    strict = all(osc[k + 1] < osc[k] for k in range(len(osc) - 1))
    res_osc = CriterionResult(
        "criterion 7a: osc(psi u) strictly decreasing on t = 4^k", strict,
        "osc sequence " + " ".join(f"{v:.2e}" for v in osc),
        expected_fail=None if strict else
        "oscillation reaches the roundoff floor by t ~ 4 and then "
        "jitters at the 1e-14 level")

    final = samples[-1]
    dev = max(abs(final.psi_u_max - R_CAP), abs(final.psi_u_min - R_CAP))
    ok_final = dev <= 0.02 * R_CAP
    hom = h.homothetic_exact_records()
    dev_h = max(max(abs(r.psi_u_max - R_CAP), abs(r.psi_u_min - R_CAP))
                for r in hom)
    ok_hom = dev_h <= 1e-3
    res_limit = CriterionResult(
        "criterion 7b: renormalized height limit", ok_final and ok_hom,
        f"final |psi u - R| = {dev:.2e} (tol {0.02 * R_CAP:.2e}); "
        f"homothetic |psi u - R| = {dev_h:.2e} (tol 1e-3); "
        f"R = {R_CAP:.6f}")
    return [res_osc, res_limit]


def criterion_8(h):
    recs = h.records(h.bump_long())
    v0 = recs[0].interior_a2f2_max
    worst = max(r.interior_a2f2_max for r in recs)
    ok1 = worst <= 2.0 * v0
    late = [r for r in recs if r.t >= 1e4]
    dev_late = abs(late[0].interior_a2f2_max - N) / N
    ok2 = dev_late <= 0.05
    hom = h.homothetic_exact_records()
    dev_h = max(abs(r.interior_a2f2_max - N) for r in hom)
    ok3 = dev_h <= 1e-6
    return [CriterionResult(
        "criterion 8: interior curvature bound", ok1 and ok2 and ok3,
        f"initial {v0:.3f}, run max {worst:.3f} (bound {2 * v0:.3f}); "
        f"|A|^2 F^2 at t>=1e4: {late[0].interior_a2f2_max:.4f} "
        f"(within 5% of {N}); homothetic deviation {dev_h:.2e}")]


def criterion_9(h):
    hom = h.homothetic_exact_records()
    worst_h = max(max(r.r_f2, r.r_hs, r.r_h) for r in hom)
    ok1 = worst_h <= 1e-8

    hs, rf2, rhs_, rh = [], [], [], []
    for nr in (16, 32, 64):
        rec = h.records(h.angular_run(nr))[-1]
        hs.append(1.0 / nr)
        rf2.append(rec.r_f2)
        rhs_.append(rec.r_hs)
        rh.append(rec.r_h)
    slopes = [_slope(hs, v) for v in (rf2, rhs_, rh)]
    ok2 = all(s >= 1.0 for s in slopes)
    return [CriterionResult(
        "criterion 9: boundary identities", ok1 and ok2,
        f"homothetic residuals <= {worst_h:.2e} (tol 1e-8); generic "
        f"refinement orders {', '.join(f'{s:.2f}' for s in slopes)} "
        f"(need >= 1)")]


def criterion_10(h):
    traj = h.bump_long()
    f2d = [f for f, _ in traj if abs(f.t - 10.0) <= 1e-8][0]
    f1d = h.axisymmetric_match()[-1][0]
    diff = float(np.abs(f2d.u - f1d.u[:, None]).max())
    ok = diff <= 1e-3
    return [CriterionResult(
        "criterion 10: axisymmetric oracle agreement", ok,
        f"sup-node difference {diff:.3e} at t=10 (tol 1e-3)")]


def criterion_2_amplitude_rejected():
    """The stated envelope-run amplitude violates the spacelike gate."""
    from .config import parse_config
    text = """
n: 2
cone: {type: round, rho: 0.5}
mesh: {nr: 64, ntheta: 64}
time: {t_end: 1.0}
initial: {kind: radial_bump, k: 1.0, a: 0.2}
"""
    try:
        parse_config(text)
    except ConfigError as e:
        return any("not spacelike" in v for v in e.violations)
    return False


ALL_CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4,
                criterion_5, criterion_6, criterion_7, criterion_8,
                criterion_9, criterion_10)


def run_all(outdir=None, verbose=False):
    h = Harness(outdir=outdir, verbose=verbose)
    results = []
    for crit in ALL_CRITERIA:
        for res in crit(h):
            results.append(res)
            _log(res.line(), verbose)
    return results
