"""Per-snapshot measurements of every tracked estimate, and the audit
that checks their preservation along a run.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .chart import Jet, inverse_metric, normal as chart_normal
from .cone import sigma_A_nu_nu
from .errors import SpacelikeViolationError


RECORD_FIELDS = (
    "t", "n", "f2_shift_min", "f2_shift_max", "hf_min", "hf_max",
    "hsf2_min", "hsf2_max", "j_max", "h_min", "area", "psi",
    "psi_u_min", "psi_u_max", "osc_psi_u", "mean_hf", "integral_residual",
    "interior_a2f2_max", "r_f2", "r_hs", "r_h", "max_inv_v2",
    "max_inv_u2", "max_u2", "min_v", "min_u", "steps",
)


@dataclass
class DiagnosticsRecord:
    t: float
    n: int
    f2_shift_min: float
    f2_shift_max: float
    hf_min: float
    hf_max: float
    hsf2_min: float
    hsf2_max: float
    j_max: float
    h_min: float
    area: float
    psi: float
    psi_u_min: float
    psi_u_max: float
    osc_psi_u: float
    mean_hf: float
    integral_residual: float
    interior_a2f2_max: float
    r_f2: float
    r_hs: float
    r_h: float
    max_inv_v2: float
    max_inv_u2: float
    max_u2: float
    min_v: float
    min_u: float
    steps: int = 0

    def to_dict(self):
        d = asdict(self)
        return {k: d[k] for k in RECORD_FIELDS}

    @staticmethod
    def from_dict(d):
        extra = set(d) - set(RECORD_FIELDS)
        missing = set(RECORD_FIELDS) - set(d)
        if extra or missing:
            raise ValueError(
                f"record schema mismatch: extra={sorted(extra)}, "
                f"missing={sorted(missing)}")
        return DiagnosticsRecord(**d)


def record(field, interior_fraction=0.5):
    """Measure every tracked quantity on one field snapshot."""
    mesh = field.mesh
    n = mesh.n
    g = kernels.geometry_fields(field)
    if not g["ok"]:
        raise SpacelikeViolationError(
            f"field is not spacelike at t={field.t:.6g}")
    u = field.u
    t = field.t
    v, S, H, A2, J = g["v"], g["S"], g["H"], g["A2"], g["J"]
    sw2 = np.sqrt(mesh.w2)

    f2_shift = u * u - 2.0 * n * t
    hf = H * u
    hsf2 = H * v * sw2              # (H/S) F^2 in chart form

    dens = u ** (n - 1) * v / mesh.w2 ** (n / 2.0)   # area element
    area = float(np.sum(mesh.weights * dens))
    psi = area ** (-1.0 / n)
    umin, umax = float(np.min(u)), float(np.max(u))

    hs_quad = float(np.sum(mesh.weights * dens * H * S))
    integral_residual = abs(hs_quad - n * area) / area
    mean_hf = float(np.sum(mesh.weights * dens * hf)) / area

    interior = mesh.sigma <= interior_fraction + 1e-12
    a2f2 = A2 * u * u
    if mesh.axisymmetric:
        interior_max = float(np.max(a2f2[interior]))
    else:
        interior_max = float(np.max(a2f2[interior, :]))

    r_f2, r_hs, r_h = boundary_residuals(field, geom=g)

    return DiagnosticsRecord(
        t=t, n=n,
        f2_shift_min=float(np.min(f2_shift)),
        f2_shift_max=float(np.max(f2_shift)),
        hf_min=float(np.min(hf)), hf_max=float(np.max(hf)),
        hsf2_min=float(np.min(hsf2)), hsf2_max=float(np.max(hsf2)),
        j_max=float(np.max(J)), h_min=float(np.min(H)),
        area=area, psi=psi,
        psi_u_min=psi * umin, psi_u_max=psi * umax,
        osc_psi_u=psi * (umax - umin),
        mean_hf=mean_hf,
        integral_residual=integral_residual,
        interior_a2f2_max=interior_max,
        r_f2=r_f2, r_hs=r_hs, r_h=r_h,
        max_inv_v2=float(np.max(1.0 / (v * v))),
        max_inv_u2=float(np.max(1.0 / (u * u))),
        max_u2=float(np.max(u * u)),
        min_v=float(np.min(v)), min_u=umin,
    )


def boundary_residuals(field, geom=None):
    """Residuals of the boundary derivative identities.

    Derivatives are taken along the in-surface unit conormal (the
    boundary covector raised through the inverse metric) with one-sided
    interior stencils, so they measure the evolved field itself rather
    than the ghost closure.  Returns (r_f2, r_hs, r_h) with

        r_f2  max |d(u^2)/d mu|
        r_hs  max |d(H/S)/d mu|
        r_h   max |dH/d mu + H A_cone(nu, nu)|
    """
    mesh = field.mesh
    if geom is None:
        geom = kernels.geometry_fields(field)
    H, S = geom["H"], geom["S"]
    u = field.u

    if mesh.axisymmetric:
        dr = mesh.dsig * mesh.spec.rho
        ur = geom["du_r"]

        def oneside(f):
            return (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dr)

        rr = mesh.r[-1]
        w2 = mesh.w2[-1]
        uc = u[-1]
        duu = ur[-1] * ur[-1]
        dux = ur[-1] * rr
        v2 = uc * uc / w2 + dux * dux - duu
        gfac = w2 / (uc * uc)
        g11 = gfac * (1.0 + ((duu - uc * uc / w2) * rr * rr + duu
                             - 2.0 * dux * dux) / v2)
        scale = np.sqrt(g11)
        r_f2 = abs(scale * oneside(u * u))
        r_hs = abs(scale * oneside(H / S))
        # radial normals are a zero direction of the cone's second form
        r_h = abs(scale * oneside(H))
        return float(r_f2), float(r_hs), float(r_h)

    du1, du2 = geom["du1"], geom["du2"]
    dsig, dth = mesh.dsig, mesh.dth

    def oneside(f):
        fs = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dsig)
        ft = (np.roll(f[-1], -1) - np.roll(f[-1], 1)) / (2.0 * dth)
        fx = mesh.sx[-1] * fs + mesh.tx[-1] * ft
        fy = mesh.sy[-1] * fs + mesh.ty[-1] * ft
        return fx, fy

    fx_f2, fy_f2 = oneside(u * u)
    fx_hs, fy_hs = oneside(H / S)
    fx_h, fy_h = oneside(H)

    r_f2 = r_hs = r_h = 0.0
    for j, bs in enumerate(mesh.boundary_samples):
        jet = Jet(x=bs.x, u=float(u[-1, j]),
                  du=np.array([du1[-1, j], du2[-1, j]]))
        ginv = inverse_metric(jet)
        m = ginv @ bs.gamma
        norm = np.sqrt(float(bs.gamma @ m))
        mhat = m / norm
        nu = chart_normal(jet)
        sig_a = sigma_A_nu_nu(mesh.spec, bs.x, jet.u, nu,
                              tangency_tol=np.inf)
        r_f2 = max(r_f2, abs(mhat[0] * fx_f2[j] + mhat[1] * fy_f2[j]))
        r_hs = max(r_hs, abs(mhat[0] * fx_hs[j] + mhat[1] * fy_hs[j]))
        r_h = max(r_h, abs(mhat[0] * fx_h[j] + mhat[1] * fy_h[j]
                           + H[-1, j] * sig_a))
    return float(r_f2), float(r_hs), float(r_h)


# ----------------------------------------------------------------- audit

def fit_j_decay(tvals, jvals, n, t_min=None, t_max=None):
    """Deterministic least-squares fit of 1/max J against log(b + 2nt).

    Slope-only regression for each candidate offset b; b itself found by
    a fixed logarithmic grid followed by golden-section refinement.
    Returns dict with a (= 1/slope), b, r2 and the window actually used.
    """
    tvals = np.asarray(tvals, dtype=float)
    jvals = np.asarray(jvals, dtype=float)
    keep = (tvals > 0.0) & (jvals > 0.0)
    if t_min is not None:
        keep &= tvals >= t_min * (1.0 - 1e-12)
    if t_max is not None:
        keep &= tvals <= t_max * (1.0 + 1e-12)
    t = tvals[keep]
    y = 1.0 / jvals[keep]
    out = {"a": float("nan"), "b": float("nan"), "r2": 0.0,
           "n_points": int(t.size),
           "t_min": None if t_min is None else float(t_min),
           "t_max": None if t_max is None else float(t_max)}
    if t.size < 3:
        return out

    def sse(b):
        x = np.log(b + 2.0 * n * t)
        sxx = float(np.dot(x, x))
        m = float(np.dot(x, y)) / sxx
        resid = y - m * x
        return float(np.dot(resid, resid)), m

    grid = 10.0 ** np.linspace(-3.0, 9.0, 121)
    vals = [sse(b)[0] for b in grid]
    k = int(np.argmin(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    # golden-section on log b
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    a_, b_ = np.log(lo), np.log(hi)
    c_ = b_ - gr * (b_ - a_)
    d_ = a_ + gr * (b_ - a_)
    fc, _ = sse(np.exp(c_))
    fd, _ = sse(np.exp(d_))
    for _ in range(80):
        if fc < fd:
            b_, d_, fd = d_, c_, fc
            c_ = b_ - gr * (b_ - a_)
            fc, _ = sse(np.exp(c_))
        else:
            a_, c_, fc = c_, d_, fd
            d_ = a_ + gr * (b_ - a_)
            fd, _ = sse(np.exp(d_))
    bbest = float(np.exp(0.5 * (a_ + b_)))
    best_sse, m = sse(bbest)
    ybar = float(np.mean(y))
    sstot = float(np.dot(y - ybar, y - ybar))
    r2 = 1.0 - best_sse / sstot if sstot > 0.0 else 0.0
    out.update(a=(1.0 / m if m != 0.0 else float("nan")), b=bbest,
               r2=float(r2))
    return out


@dataclass
class AuditReport:
    checks: list
    fit: dict
    n: int

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks if not c.get("skipped"))

    def to_dict(self):
        fit = {k: (None if isinstance(v, float) and not np.isfinite(v)
                   else v) for k, v in self.fit.items()}
        return {"n": self.n, "passed": self.passed, "checks": self.checks,
                "fit": fit}

    def summary_lines(self):
        lines = []
        for c in self.checks:
            tag = "SKIP" if c.get("skipped") else \
                ("PASS" if c["passed"] else "FAIL")
            lines.append(f"[{tag}] {c['name']}: margin={c['margin']:.3e}"
                         f" ({c['details']})")
        f = self.fit
        lines.append(f"[INFO] j-decay fit: a={f['a']:.6g} b={f['b']:.6g}"
                     f" r2={f['r2']:.6g} points={f['n_points']}")
        return lines


def audit(records, tol_envelope=1e-6, tol_hull=None, tol_j=1e-6,
          tol_h=1e-6, tol_hf=None, tol_band=1e-3, osc_floor=1e-12,
          tol_mean_hf=None, fit_t_min=None, fit_t_max=None):
    """Check every preserved quantity across a trajectory of records.

    Constants in the underlying estimates are existence-only, so each
    check measures the initial hull of its quantity and verifies
    persistence, with tolerances for discretization error.
    """
    recs = [r if isinstance(r, DiagnosticsRecord)
            else DiagnosticsRecord.from_dict(r) for r in records]
    if len(recs) < 2:
        raise ValueError("audit needs at least two records")
    n = recs[0].n
    if fit_t_min is None:
        fit_t_min = recs[-1].t / 100.0      # last two decades of the run
    if tol_hull is None:
        tol_hull = 1e-3 * n
    if tol_hf is None:
        tol_hf = 1e-2 * n
    if tol_mean_hf is None:
        tol_mean_hf = 1e-2 * n
    r0 = recs[0]
    t = np.array([r.t for r in recs])
    checks = []

    def add(name, violation, tol, details, skipped=False):
        checks.append({"name": name, "passed": bool(violation <= tol),
                       "margin": float(tol - violation),
                       "details": details, "skipped": skipped})

    # (a) envelope: max(F^2-2nt) non-increasing, min non-decreasing
    fmax = np.array([r.f2_shift_max for r in recs])
    fmin = np.array([r.f2_shift_min for r in recs])
    growth = np.maximum(np.diff(fmax), -np.diff(fmin))
    k = int(np.argmax(growth))
    viol = max(float(growth[k]), 0.0)
    add("envelope", viol, tol_envelope,
        f"worst hull growth {viol:.3e} at t={t[k + 1]:.6g}")

    # (b) (H/S) F^2 stays in its initial hull
    hsmax = np.array([r.hsf2_max for r in recs])
    hsmin = np.array([r.hsf2_min for r in recs])
    viol = max(float(np.max(hsmax - r0.hsf2_max, initial=0.0)),
               float(np.max(r0.hsf2_min - hsmin, initial=0.0)), 0.0)
    add("hs_hull", viol, tol_hull,
        f"initial hull [{r0.hsf2_min:.6g}, {r0.hsf2_max:.6g}]")

    # (c) J bounded by max(initial, n-1)
    jmax = np.array([r.j_max for r in recs])
    jbound = max(r0.j_max, n - 1.0)
    viol = float(np.max(jmax - jbound, initial=0.0))
    add("j_bound", max(viol, 0.0), tol_j, f"bound {jbound:.6g}")

    # (d) mean convexity preserved
    hmin = np.array([r.h_min for r in recs])
    if r0.h_min >= 0.0:
        viol = max(float(np.max(-hmin, initial=0.0)), 0.0)
        add("mean_convexity", viol, tol_h, f"initial min H {r0.h_min:.6g}")
    else:
        add("mean_convexity", 0.0, tol_h,
            f"not initially mean convex (min H {r0.h_min:.6g})",
            skipped=True)

    # (e) HF inside its initial hull expanded by the hull/J-implied slack
    hfmax = np.array([r.hf_max for r in recs])
    hfmin = np.array([r.hf_min for r in recs])
    upper = r0.hf_max * np.sqrt(1.0 + jbound)
    viol = max(float(np.max(hfmax - upper, initial=0.0)),
               float(np.max(r0.hf_min - hfmin, initial=0.0)), 0.0)
    add("hf_band", viol, tol_hf,
        f"band [{r0.hf_min:.6g}, {upper:.6g}]")

    # (f) psi F confined to a fixed multiplicative band
    pmax = float(np.max([r.psi_u_max for r in recs]))
    pmin = float(np.min([r.psi_u_min for r in recs]))
    q0 = np.sqrt(r0.f2_shift_max / r0.f2_shift_min)
    bound = q0 * q0 * (1.0 + jbound) ** (1.0 / n)
    ratio = pmax / pmin
    add("psi_f_band", ratio, bound * (1.0 + tol_band),
        f"measured ratio {ratio:.6g}, bound {bound:.6g}")

    # (g) oscillation of psi u non-increasing (within the noise floor)
    osc = np.array([r.osc_psi_u for r in recs])
    grow = np.diff(osc)
    viol = max(float(np.max(grow, initial=0.0)), 0.0)
    add("osc_decay", viol, osc_floor,
        f"worst oscillation growth {viol:.3e}")

    # area-weighted mean of HF between n/sqrt(1+maxJ) and n
    run_jmax = float(np.max(jmax))
    mean_hf = np.array([r.mean_hf for r in recs])
    lower = n / np.sqrt(1.0 + run_jmax)
    viol = max(float(np.max(mean_hf - n, initial=0.0)),
               float(np.max(lower - mean_hf, initial=0.0)), 0.0)
    add("mean_hf_bracket", viol, tol_mean_hf,
        f"bracket [{lower:.6g}, {n}]")

    fit = fit_j_decay(t, jmax, n, t_min=fit_t_min, t_max=fit_t_max)
    return AuditReport(checks=checks, fit=fit, n=n)
