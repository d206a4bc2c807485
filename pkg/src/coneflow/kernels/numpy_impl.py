"""Vectorized pure-numpy implementations of the hot kernels.

These are the fallback backend and the readable reference for the numba
twins in ``numba_impl``; both must produce the same numbers (the test
suite compares them on random fields).
"""

import numpy as np

STATUS_OK = 0
STATUS_SPACELIKE = 1
STATUS_STIFF = 2
STATUS_REJECTED = 3


# ---------------------------------------------------------------- 2-D stencils

def closure_2d(u, gcoef, wv):
    """Ghost ring (Neumann) and across-origin ring (quadratic fit).

    The fit is applied in mean-centered form so constant data maps to
    exactly constant closure values.
    """
    ghost = u[-2] - gcoef * (np.roll(u[-1], -1) - np.roll(u[-1], 1))
    s = np.concatenate([u[0], u[1]])
    sbar = s.mean()
    virt = sbar + wv @ (s - sbar)
    return ghost, virt


def jets_2d(u, ghost, virt, dsig, dth, geo):
    (x1, x2, w2, sx, sy, tx, ty,
     sxx, sxy, syy, txx, txy, tyy) = geo
    ue = np.concatenate([virt[None, :], u, ghost[None, :]], axis=0)
    us = (ue[2:] - ue[:-2]) / (2.0 * dsig)
    uss = (ue[2:] - 2.0 * ue[1:-1] + ue[:-2]) / dsig ** 2
    up = np.roll(u, -1, axis=1)
    um = np.roll(u, 1, axis=1)
    ut = (up - um) / (2.0 * dth)
    utt = (up - 2.0 * u + um) / dth ** 2
    uep = np.roll(ue, -1, axis=1)
    uem = np.roll(ue, 1, axis=1)
    ust = (uep[2:] - uem[2:] - uep[:-2] + uem[:-2]) / (4.0 * dsig * dth)

    du1 = sx * us + tx * ut
    du2 = sy * us + ty * ut
    d11 = sx * sx * uss + 2.0 * sx * tx * ust + tx * tx * utt \
        + sxx * us + txx * ut
    d12 = sx * sy * uss + (sx * ty + sy * tx) * ust + tx * ty * utt \
        + sxy * us + txy * ut
    d22 = sy * sy * uss + 2.0 * sy * ty * ust + ty * ty * utt \
        + syy * us + tyy * ut
    return du1, du2, d11, d12, d22


def _ginv_2d(u, w2, x1, x2, du1, du2, v2):
    gfac = w2 / (u * u)
    cc = du1 * du1 + du2 * du2 - u * u / w2
    dux = du1 * x1 + du2 * x2
    g11 = gfac * (1.0 + (cc * x1 * x1 + du1 * du1 - 2.0 * dux * x1 * du1) / v2)
    g12 = gfac * ((cc * x1 * x2 + du1 * du2 - dux * (x1 * du2 + x2 * du1)) / v2)
    g22 = gfac * (1.0 + (cc * x2 * x2 + du2 * du2 - 2.0 * dux * x2 * du2) / v2)
    return g11, g12, g22


def geometry_2d(n, u, du1, du2, d11, d12, d22, geo):
    """Pointwise surface quantities; n is the surface dimension (2 here)."""
    (x1, x2, w2) = geo[0], geo[1], geo[2]
    dux = du1 * x1 + du2 * x2
    duu = du1 * du1 + du2 * du2
    v2 = u * u / w2 + dux * dux - duu
    node_ok = (v2 > 0.0) & (u > 0.0)
    ok = bool(np.all(node_ok))
    v2s = np.where(node_ok, v2, 1.0)
    v = np.sqrt(v2s)
    sw2 = np.sqrt(w2)
    S = u * u / (v * sw2)
    J = (duu - dux * dux) / v2s
    g11, g12, g22 = _ginv_2d(u, w2, x1, x2, du1, du2, v2s)
    grad2 = g11 * du1 * du1 + 2.0 * g12 * du1 * du2 + g22 * du2 * du2

    pref = 1.0 / (sw2 * v)
    uw = u / w2
    uw2 = u * u / (w2 * w2)
    h11 = pref * (u * d11 - 2.0 * du1 * du1 - 2.0 * uw * x1 * du1
                  + uw2 * x1 * x1 + u * uw)
    h12 = pref * (u * d12 - 2.0 * du1 * du2 - uw * (x1 * du2 + x2 * du1)
                  + uw2 * x1 * x2)
    h22 = pref * (u * d22 - 2.0 * du2 * du2 - 2.0 * uw * x2 * du2
                  + uw2 * x2 * x2 + u * uw)
    m11 = g11 * h11 + g12 * h12
    m12 = g11 * h12 + g12 * h22
    m21 = g12 * h11 + g22 * h12
    m22 = g12 * h12 + g22 * h22
    H = m11 + m22
    A2 = m11 * m11 + m22 * m22 + 2.0 * m12 * m21
    return {"v": v, "S": S, "H": H, "A2": A2, "J": J, "grad_u_sq": grad2,
            "v2": v2, "ok": ok, "node_ok": node_ok}


def rhs_2d(n, u, ghost, virt, dsig, dth, geo, kappa_theta):
    """Flow right-hand side, curvature readout, and the stability bound.

    Returns (rhs, H_rhs, maxD, ok).  maxD bounds the spectral radius of
    the discrete spatial operator given the azimuthal mode caps in
    kappa_theta, so dt <= 2/maxD is the explicit stability limit.
    """
    (x1, x2, w2) = geo[0], geo[1], geo[2]
    (sx, sy, tx, ty) = geo[3:7]
    du1, du2, d11, d12, d22 = jets_2d(u, ghost, virt, dsig, dth, geo)
    dux = du1 * x1 + du2 * x2
    duu = du1 * du1 + du2 * du2
    v2 = u * u / w2 + dux * dux - duu
    node_ok = (v2 > 0.0) & (u > 0.0)
    ok = bool(np.all(node_ok))
    v2s = np.where(node_ok, v2, 1.0)
    g11, g12, g22 = _ginv_2d(u, w2, x1, x2, du1, du2, v2s)
    lap = g11 * d11 + 2.0 * g12 * d12 + g22 * d22
    rhs = lap + (n + 1.0) / u - (u / w2 + 2.0 * dux) / v2s
    H_rhs = rhs * u / (np.sqrt(v2s) * np.sqrt(w2))

    # second-order terms only: the advective pieces scale with the same
    # 1/spacing^2 factors and are covered by the safety margin
    css = g11 * sx * sx + 2.0 * g12 * sx * sy + g22 * sy * sy
    ctt = g11 * tx * tx + 2.0 * g12 * tx * ty + g22 * ty * ty
    cst = 2.0 * (g11 * sx * tx + g12 * (sx * ty + sy * tx) + g22 * sy * ty)
    kap = kappa_theta[:, None]
    D = (4.0 * np.abs(css) / dsig ** 2
         + kap * np.abs(ctt) / dth ** 2
         + np.sqrt(kap) * np.abs(cst) / (dsig * dth))
    maxD = float(np.max(D))
    return rhs, H_rhs, maxD, ok


def filter_rows_2d(u, filt, n_filt):
    """Project the inner rings onto their resolvable azimuthal modes."""
    if n_filt:
        u[:n_filt] = np.einsum("kab,kb->ka", filt, u[:n_filt])
    return u


def advance_2d(u, t, t_target, n, dsig, dth, geo, gcoef, wv, filt, n_filt,
               kappa_theta, safety, dt_min, dt_max, max_retries):
    """Adaptive explicit-midpoint driver; returns (u, t, steps, status, dt)."""
    u = u.copy()
    steps = 0
    dt = 0.0
    ghost, virt = closure_2d(u, gcoef, wv)
    k1, _, maxD, ok = rhs_2d(n, u, ghost, virt, dsig, dth, geo, kappa_theta)
    if not ok:
        return u, t, steps, STATUS_SPACELIKE, dt
    while t_target - t > 1e-14 * max(1.0, abs(t_target)):
        dt = min(safety * 2.0 / maxD, dt_max, t_target - t)
        if dt < dt_min:
            return u, t, steps, STATUS_STIFF, dt
        retries = 0
        while True:
            umid = u + (0.5 * dt) * k1
            filter_rows_2d(umid, filt, n_filt)
            gm, vm = closure_2d(umid, gcoef, wv)
            k2, _, _, ok2 = rhs_2d(n, umid, gm, vm, dsig, dth, geo,
                                   kappa_theta)
            if ok2:
                unew = u + dt * k2
                filter_rows_2d(unew, filt, n_filt)
                gn, vn = closure_2d(unew, gcoef, wv)
                k_next, _, maxD_next, ok3 = rhs_2d(
                    n, unew, gn, vn, dsig, dth, geo, kappa_theta)
                if ok3 and np.all(unew > 0.0):
                    u = unew
                    t += dt
                    steps += 1
                    k1 = k_next
                    maxD = maxD_next
                    break
            retries += 1
            if retries > max_retries:
                return u, t, steps, STATUS_REJECTED, dt
            dt *= 0.5
            if dt < dt_min:
                return u, t, steps, STATUS_STIFF, dt
    return u, t, steps, STATUS_OK, dt


# ---------------------------------------------------------------- 1-D stencils

def closure_1d(u):
    """Even reflection across the origin, mirror ghost at the boundary."""
    return u[-2], u[0]


def jets_1d(u, ghost, virt, dr):
    ue = np.concatenate([[virt], u, [ghost]])
    ur = (ue[2:] - ue[:-2]) / (2.0 * dr)
    urr = (ue[2:] - 2.0 * ue[1:-1] + ue[:-2]) / dr ** 2
    return ur, urr


def _radial_core(n, u, r, w2, ur):
    """Shared pieces of the radial reduction evaluated at x = (r, 0, ..., 0)."""
    dux = ur * r
    duu = ur * ur
    v2 = u * u / w2 + dux * dux - duu
    gfac = w2 / (u * u)
    g11 = gfac * (1.0 + ((duu - u * u / w2) * r * r + duu
                         - 2.0 * dux * dux) / v2)
    return dux, duu, v2, gfac, g11


def rhs_1d(n, u, ghost, virt, dr, r, w2):
    ur, urr = jets_1d(u, ghost, virt, dr)
    dux, duu, v2, gfac, g11 = _radial_core(n, u, r, w2, ur)
    node_ok = (v2 > 0.0) & (u > 0.0)
    ok = bool(np.all(node_ok))
    v2s = np.where(node_ok, v2, 1.0)
    lap = g11 * urr + (n - 1.0) * gfac * ur / r
    rhs = lap + (n + 1.0) / u - (u / w2 + 2.0 * dux) / v2s
    H_rhs = rhs * u / (np.sqrt(v2s) * np.sqrt(w2))
    c1 = (n - 1.0) * gfac / r - 2.0 * r / v2s
    D = 4.0 * np.abs(g11) / dr ** 2 + np.abs(c1) / dr
    return rhs, H_rhs, float(np.max(D)), ok


def geometry_1d(n, u, ur, urr, r, w2):
    dux, duu, v2, gfac, g11 = _radial_core(n, u, r, w2, ur)
    node_ok = (v2 > 0.0) & (u > 0.0)
    ok = bool(np.all(node_ok))
    v2s = np.where(node_ok, v2, 1.0)
    v = np.sqrt(v2s)
    sw2 = np.sqrt(w2)
    S = u * u / (v * sw2)
    J = (duu - dux * dux) / v2s
    grad2 = g11 * ur * ur
    pref = 1.0 / (sw2 * v)
    uw = u / w2
    h11 = pref * (u * urr - 2.0 * ur * ur - 2.0 * uw * r * ur
                  + (u * u / (w2 * w2)) * r * r + u * uw)
    hkk = pref * (u * ur / r + u * uw)
    lam1 = g11 * h11
    lamk = gfac * hkk
    H = lam1 + (n - 1.0) * lamk
    A2 = lam1 * lam1 + (n - 1.0) * lamk * lamk
    return {"v": v, "S": S, "H": H, "A2": A2, "J": J, "grad_u_sq": grad2,
            "v2": v2, "ok": ok, "node_ok": node_ok}


def advance_1d(u, t, t_target, n, dr, r, w2, safety, dt_min, dt_max,
               max_retries):
    u = u.copy()
    steps = 0
    dt = 0.0
    ghost, virt = closure_1d(u)
    k1, _, maxD, ok = rhs_1d(n, u, ghost, virt, dr, r, w2)
    if not ok:
        return u, t, steps, STATUS_SPACELIKE, dt
    while t_target - t > 1e-14 * max(1.0, abs(t_target)):
        dt = min(safety * 2.0 / maxD, dt_max, t_target - t)
        if dt < dt_min:
            return u, t, steps, STATUS_STIFF, dt
        retries = 0
        while True:
            umid = u + (0.5 * dt) * k1
            gm, vm = closure_1d(umid)
            k2, _, _, ok2 = rhs_1d(n, umid, gm, vm, dr, r, w2)
            if ok2:
                unew = u + dt * k2
                gn, vn = closure_1d(unew)
                k_next, _, maxD_next, ok3 = rhs_1d(n, unew, gn, vn, dr, r, w2)
                if ok3 and np.all(unew > 0.0):
                    u = unew
                    t += dt
                    steps += 1
                    k1 = k_next
                    maxD = maxD_next
                    break
            retries += 1
            if retries > max_retries:
                return u, t, steps, STATUS_REJECTED, dt
            dt *= 0.5
            if dt < dt_min:
                return u, t, steps, STATUS_STIFF, dt
    return u, t, steps, STATUS_OK, dt
