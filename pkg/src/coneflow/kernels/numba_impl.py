"""Numba-compiled twins of the hot kernels in ``numpy_impl``.

Same arithmetic, loop form, cached compilation.  The 2-D right-hand
side parallelizes over rings; everything else is cheap enough serial.
"""

import numpy as np
from numba import njit, prange

STATUS_OK = 0
STATUS_SPACELIKE = 1
STATUS_STIFF = 2
STATUS_REJECTED = 3


@njit(cache=True)
def closure_2d(u, gcoef, wv, ghost, virt):
    nr, nth = u.shape
    for j in range(nth):
        jm = nth - 1 if j == 0 else j - 1
        jp = 0 if j == nth - 1 else j + 1
        ghost[j] = u[nr - 2, j] - gcoef[j] * (u[nr - 1, jp] - u[nr - 1, jm])
    sbar = 0.0
    for b in range(nth):
        sbar += u[0, b] + u[1, b]
    sbar /= 2.0 * nth
    for j in range(nth):
        s = sbar
        for b in range(nth):
            s += wv[j, b] * (u[0, b] - sbar)
        for b in range(nth):
            s += wv[j, nth + b] * (u[1, b] - sbar)
        virt[j] = s


@njit(cache=True)
def filter_rows_2d(u, filt, n_filt, work):
    nth = u.shape[1]
    for k in range(n_filt):
        for a in range(nth):
            s = 0.0
            for b in range(nth):
                s += filt[k, a, b] * u[k, b]
            work[k, a] = s
        for a in range(nth):
            u[k, a] = work[k, a]


@njit(cache=True, parallel=True, fastmath=True)
def rhs_2d(n, u, ghost, virt, dsig, dth, x1, x2, w2, sx, sy, tx, ty,
           sxx, sxy, syy, txx, txy, tyy, kappa_theta, rhs, hrhs, rowd,
           rowok):
    nr, nth = u.shape
    dsig2 = dsig * dsig
    dth2 = dth * dth
    nf = float(n)
    for i in prange(nr):
        dmax = 0.0
        allok = True
        kap = kappa_theta[i]
        skap = np.sqrt(kap)
        for j in range(nth):
            jm = nth - 1 if j == 0 else j - 1
            jp = 0 if j == nth - 1 else j + 1
            uc = u[i, j]
            if i == 0:
                um_, umm, ump = virt[j], virt[jm], virt[jp]
            else:
                um_, umm, ump = u[i - 1, j], u[i - 1, jm], u[i - 1, jp]
            if i == nr - 1:
                up_, upm, upp = ghost[j], ghost[jm], ghost[jp]
            else:
                up_, upm, upp = u[i + 1, j], u[i + 1, jm], u[i + 1, jp]
            us = (up_ - um_) / (2.0 * dsig)
            uss = (up_ - 2.0 * uc + um_) / dsig2
            ut = (u[i, jp] - u[i, jm]) / (2.0 * dth)
            utt = (u[i, jp] - 2.0 * uc + u[i, jm]) / dth2
            ust = (upp - upm - ump + umm) / (4.0 * dsig * dth)

            a_sx, a_sy = sx[i, j], sy[i, j]
            a_tx, a_ty = tx[i, j], ty[i, j]
            du1 = a_sx * us + a_tx * ut
            du2 = a_sy * us + a_ty * ut
            d11 = (a_sx * a_sx * uss + 2.0 * a_sx * a_tx * ust
                   + a_tx * a_tx * utt + sxx[i, j] * us + txx[i, j] * ut)
            d12 = (a_sx * a_sy * uss + (a_sx * a_ty + a_sy * a_tx) * ust
                   + a_tx * a_ty * utt + sxy[i, j] * us + txy[i, j] * ut)
            d22 = (a_sy * a_sy * uss + 2.0 * a_sy * a_ty * ust
                   + a_ty * a_ty * utt + syy[i, j] * us + tyy[i, j] * ut)

            xx1, xx2, ww2 = x1[i, j], x2[i, j], w2[i, j]
            dux = du1 * xx1 + du2 * xx2
            duu = du1 * du1 + du2 * du2
            v2 = uc * uc / ww2 + dux * dux - duu
            if v2 <= 0.0 or uc <= 0.0:
                allok = False
                v2 = 1.0
            gfac = ww2 / (uc * uc)
            cc = duu - uc * uc / ww2
            g11 = gfac * (1.0 + (cc * xx1 * xx1 + du1 * du1
                                 - 2.0 * dux * xx1 * du1) / v2)
            g12 = gfac * ((cc * xx1 * xx2 + du1 * du2
                           - dux * (xx1 * du2 + xx2 * du1)) / v2)
            g22 = gfac * (1.0 + (cc * xx2 * xx2 + du2 * du2
                                 - 2.0 * dux * xx2 * du2) / v2)
            lap = g11 * d11 + 2.0 * g12 * d12 + g22 * d22
            val = lap + (nf + 1.0) / uc - (uc / ww2 + 2.0 * dux) / v2
            rhs[i, j] = val
            hrhs[i, j] = val * uc / (np.sqrt(v2) * np.sqrt(ww2))

            css = g11 * a_sx * a_sx + 2.0 * g12 * a_sx * a_sy \
                + g22 * a_sy * a_sy
            ctt = g11 * a_tx * a_tx + 2.0 * g12 * a_tx * a_ty \
                + g22 * a_ty * a_ty
            cst = 2.0 * (g11 * a_sx * a_tx
                         + g12 * (a_sx * a_ty + a_sy * a_tx)
                         + g22 * a_sy * a_ty)
            D = (4.0 * abs(css) / dsig2 + kap * abs(ctt) / dth2
                 + skap * abs(cst) / (dsig * dth))
            if D > dmax:
                dmax = D
        rowd[i] = dmax
        rowok[i] = allok
    maxD = 0.0
    ok = True
    for i in range(nr):
        if rowd[i] > maxD:
            maxD = rowd[i]
        if not rowok[i]:
            ok = False
    return maxD, ok


@njit(cache=True)
def _positive(u):
    for v in u.flat:
        if v <= 0.0:
            return False
    return True


@njit(cache=True)
def advance_2d(u, t, t_target, n, dsig, dth, x1, x2, w2, sx, sy, tx, ty,
               sxx, sxy, syy, txx, txy, tyy, gcoef, wv, filt, n_filt,
               kappa_theta, safety, dt_min, dt_max, max_retries):
    nr, nth = u.shape
    ghost = np.empty(nth)
    virt = np.empty(nth)
    fwork = np.empty((max(n_filt, 1), nth))
    k1 = np.empty_like(u)
    k2 = np.empty_like(u)
    k3 = np.empty_like(u)
    hr = np.empty_like(u)
    umid = np.empty_like(u)
    unew = np.empty_like(u)
    rowd = np.empty(nr)
    rowok = np.empty(nr, dtype=np.bool_)
    steps = 0
    dt = 0.0

    closure_2d(u, gcoef, wv, ghost, virt)
    maxD, ok = rhs_2d(n, u, ghost, virt, dsig, dth, x1, x2, w2, sx, sy,
                      tx, ty, sxx, sxy, syy, txx, txy, tyy, kappa_theta,
                      k1, hr, rowd, rowok)
    if not ok:
        return u, t, steps, STATUS_SPACELIKE, dt
    while t_target - t > 1e-14 * max(1.0, abs(t_target)):
        dt = safety * 2.0 / maxD
        if dt > dt_max:
            dt = dt_max
        if dt > t_target - t:
            dt = t_target - t
        if dt < dt_min:
            return u, t, steps, STATUS_STIFF, dt
        retries = 0
        while True:
            for i in range(nr):
                for j in range(nth):
                    umid[i, j] = u[i, j] + 0.5 * dt * k1[i, j]
            filter_rows_2d(umid, filt, n_filt, fwork)
            closure_2d(umid, gcoef, wv, ghost, virt)
            _, ok2 = rhs_2d(n, umid, ghost, virt, dsig, dth, x1, x2, w2,
                            sx, sy, tx, ty, sxx, sxy, syy, txx, txy, tyy,
                            kappa_theta, k2, hr, rowd, rowok)
            committed = False
            if ok2:
                for i in range(nr):
                    for j in range(nth):
                        unew[i, j] = u[i, j] + dt * k2[i, j]
                filter_rows_2d(unew, filt, n_filt, fwork)
                closure_2d(unew, gcoef, wv, ghost, virt)
                maxD_next, ok3 = rhs_2d(
                    n, unew, ghost, virt, dsig, dth, x1, x2, w2, sx, sy,
                    tx, ty, sxx, sxy, syy, txx, txy, tyy, kappa_theta,
                    k3, hr, rowd, rowok)
                if ok3 and _positive(unew):
                    for i in range(nr):
                        for j in range(nth):
                            u[i, j] = unew[i, j]
                            k1[i, j] = k3[i, j]
                    maxD = maxD_next
                    t += dt
                    steps += 1
                    committed = True
            if committed:
                break
            retries += 1
            if retries > max_retries:
                return u, t, steps, STATUS_REJECTED, dt
            dt *= 0.5
            if dt < dt_min:
                return u, t, steps, STATUS_STIFF, dt
    return u, t, steps, STATUS_OK, dt


# ---------------------------------------------------------------- radial mode

@njit(cache=True, fastmath=True)
def rhs_1d(n, u, ghost, virt, dr, r, w2, rhs, hrhs):
    nr = u.size
    nf = float(n)
    maxD = 0.0
    ok = True
    for i in range(nr):
        uc = u[i]
        um_ = virt if i == 0 else u[i - 1]
        up_ = ghost if i == nr - 1 else u[i + 1]
        ur = (up_ - um_) / (2.0 * dr)
        urr = (up_ - 2.0 * uc + um_) / (dr * dr)
        rr, ww2 = r[i], w2[i]
        dux = ur * rr
        duu = ur * ur
        v2 = uc * uc / ww2 + dux * dux - duu
        if v2 <= 0.0 or uc <= 0.0:
            ok = False
            v2 = 1.0
        gfac = ww2 / (uc * uc)
        g11 = gfac * (1.0 + ((duu - uc * uc / ww2) * rr * rr + duu
                             - 2.0 * dux * dux) / v2)
        lap = g11 * urr + (nf - 1.0) * gfac * ur / rr
        val = lap + (nf + 1.0) / uc - (uc / ww2 + 2.0 * dux) / v2
        rhs[i] = val
        hrhs[i] = val * uc / (np.sqrt(v2) * np.sqrt(ww2))
        c1 = (nf - 1.0) * gfac / rr - 2.0 * rr / v2
        D = 4.0 * abs(g11) / (dr * dr) + abs(c1) / dr
        if D > maxD:
            maxD = D
    return maxD, ok


@njit(cache=True)
def advance_1d(u, t, t_target, n, dr, r, w2, safety, dt_min, dt_max,
               max_retries):
    nr = u.size
    k1 = np.empty(nr)
    k2 = np.empty(nr)
    k3 = np.empty(nr)
    hr = np.empty(nr)
    umid = np.empty(nr)
    unew = np.empty(nr)
    steps = 0
    dt = 0.0
    maxD, ok = rhs_1d(n, u, u[nr - 2], u[0], dr, r, w2, k1, hr)
    if not ok:
        return u, t, steps, STATUS_SPACELIKE, dt
    while t_target - t > 1e-14 * max(1.0, abs(t_target)):
        dt = safety * 2.0 / maxD
        if dt > dt_max:
            dt = dt_max
        if dt > t_target - t:
            dt = t_target - t
        if dt < dt_min:
            return u, t, steps, STATUS_STIFF, dt
        retries = 0
        while True:
            for i in range(nr):
                umid[i] = u[i] + 0.5 * dt * k1[i]
            _, ok2 = rhs_1d(n, umid, umid[nr - 2], umid[0], dr, r, w2,
                            k2, hr)
            committed = False
            if ok2:
                for i in range(nr):
                    unew[i] = u[i] + dt * k2[i]
                maxD_next, ok3 = rhs_1d(n, unew, unew[nr - 2], unew[0],
                                        dr, r, w2, k3, hr)
                if ok3 and _positive(unew):
                    for i in range(nr):
                        u[i] = unew[i]
                        k1[i] = k3[i]
                    maxD = maxD_next
                    t += dt
                    steps += 1
                    committed = True
            if committed:
                break
            retries += 1
            if retries > max_retries:
                return u, t, steps, STATUS_REJECTED, dt
            dt *= 0.5
            if dt < dt_min:
                return u, t, steps, STATUS_STIFF, dt
    return u, t, steps, STATUS_OK, dt
