"""Field-level kernel API with backend dispatch.

Hot paths (right-hand side, time-advance drivers) run on the backend
chosen by ``CONEFLOW_BACKEND``; cold diagnostic paths always use the
vectorized numpy implementations.
"""

import numpy as np

from ..backend import USING_NUMBA
from . import numpy_impl as npk

if USING_NUMBA:
    from . import numba_impl as nbk
else:
    nbk = None

STATUS_OK = npk.STATUS_OK
STATUS_SPACELIKE = npk.STATUS_SPACELIKE
STATUS_STIFF = npk.STATUS_STIFF
STATUS_REJECTED = npk.STATUS_REJECTED

STATUS_NAMES = {0: "ok", 1: "spacelike violation", 2: "stiffness",
                3: "step rejected"}


def _closure(field):
    mesh = field.mesh
    if mesh.axisymmetric:
        return npk.closure_1d(field.u)
    return npk.closure_2d(field.u, mesh.gcoef, mesh.wv)


def jets_2d(field):
    mesh = field.mesh
    ghost, virt = _closure(field)
    return npk.jets_2d(field.u, ghost, virt, mesh.dsig, mesh.dth, mesh.geo())


def jets_1d(field):
    mesh = field.mesh
    ghost, virt = _closure(field)
    dr = mesh.dsig * mesh.spec.rho
    return npk.jets_1d(field.u, ghost, virt, dr)


def geometry_fields(field):
    """Pointwise surface quantities at every node (numpy path).

    Returns a dict with v, S, H, A2, J, grad_u_sq, v2, du*, ok, node_ok.
    """
    mesh = field.mesh
    if mesh.axisymmetric:
        ur, urr = jets_1d(field)
        out = npk.geometry_1d(mesh.n, field.u, ur, urr, mesh.r, mesh.w2)
        out["du_r"] = ur
        return out
    du1, du2, d11, d12, d22 = jets_2d(field)
    out = npk.geometry_2d(mesh.n, field.u, du1, du2, d11, d12, d22,
                          mesh.geo())
    out["du1"], out["du2"] = du1, du2
    return out


def rhs_field(field):
    """(rhs, H_from_rhs, maxD, ok) on the active backend."""
    mesh = field.mesh
    ghost, virt = _closure(field)
    if mesh.axisymmetric:
        dr = mesh.dsig * mesh.spec.rho
        if USING_NUMBA:
            rhs = np.empty_like(field.u)
            hr = np.empty_like(field.u)
            maxD, ok = nbk.rhs_1d(mesh.n, field.u, ghost, virt, dr,
                                  mesh.r, mesh.w2, rhs, hr)
            return rhs, hr, maxD, ok
        return npk.rhs_1d(mesh.n, field.u, ghost, virt, dr, mesh.r, mesh.w2)
    if USING_NUMBA:
        rhs = np.empty_like(field.u)
        hr = np.empty_like(field.u)
        rowd = np.empty(mesh.nr)
        rowok = np.empty(mesh.nr, dtype=np.bool_)
        maxD, ok = nbk.rhs_2d(mesh.n, field.u, ghost, virt, mesh.dsig,
                              mesh.dth, *mesh.geo(), mesh.kappa_theta,
                              rhs, hr, rowd, rowok)
        return rhs, hr, maxD, bool(ok)
    return npk.rhs_2d(mesh.n, field.u, ghost, virt, mesh.dsig, mesh.dth,
                      mesh.geo(), mesh.kappa_theta)


def advance_field(field, t_target, safety, dt_min, dt_max, max_retries=10):
    """Advance adaptively to t_target; returns (field, steps, status, dt)."""
    from ..mesh import Field
    mesh = field.mesh
    if mesh.axisymmetric:
        dr = mesh.dsig * mesh.spec.rho
        if USING_NUMBA:
            u, t, steps, status, dt = nbk.advance_1d(
                field.u.copy(), field.t, t_target, mesh.n, dr, mesh.r,
                mesh.w2, safety, dt_min, dt_max, max_retries)
        else:
            u, t, steps, status, dt = npk.advance_1d(
                field.u, field.t, t_target, mesh.n, dr, mesh.r, mesh.w2,
                safety, dt_min, dt_max, max_retries)
    elif USING_NUMBA:
        u, t, steps, status, dt = nbk.advance_2d(
            field.u.copy(), field.t, t_target, mesh.n, mesh.dsig, mesh.dth,
            *mesh.geo(), mesh.gcoef, mesh.wv, mesh.filt, mesh.n_filt,
            mesh.kappa_theta, safety, dt_min, dt_max, max_retries)
    else:
        u, t, steps, status, dt = npk.advance_2d(
            field.u, field.t, t_target, mesh.n, mesh.dsig, mesh.dth,
            mesh.geo(), mesh.gcoef, mesh.wv, mesh.filt, mesh.n_filt,
            mesh.kappa_theta, safety, dt_min, dt_max, max_retries)
    return Field(mesh=mesh, u=u, t=t), steps, int(status), dt


def step_field(field, dt, max_retries=10):
    """One explicit midpoint step of size dt (reference numpy path).

    Re-applies the boundary closure after each stage and checks the
    result; on a post-step violation the step is retried with halved dt
    up to max_retries times.  Returns the new field (dt == 0 is the
    identity).
    """
    from ..errors import SpacelikeViolationError, StepRejectedError
    from ..mesh import Field
    mesh = field.mesh
    if dt == 0.0:
        return Field(mesh=mesh, u=field.u.copy(), t=field.t)
    if mesh.axisymmetric:
        dr = mesh.dsig * mesh.spec.rho

        def _rhs(u):
            g, v = npk.closure_1d(u)
            return npk.rhs_1d(mesh.n, u, g, v, dr, mesh.r, mesh.w2)

        def _post(u):
            return u
    else:
        def _rhs(u):
            g, v = npk.closure_2d(u, mesh.gcoef, mesh.wv)
            return npk.rhs_2d(mesh.n, u, g, v, mesh.dsig, mesh.dth,
                              mesh.geo(), mesh.kappa_theta)

        def _post(u):
            return npk.filter_rows_2d(u, mesh.filt, mesh.n_filt)

    k1, _, _, ok = _rhs(field.u)
    if not ok:
        raise SpacelikeViolationError(
            f"field is not spacelike at t={field.t:.6g}")
    for _ in range(max_retries + 1):
        umid = _post(field.u + 0.5 * dt * k1)
        k2, _, _, ok2 = _rhs(umid)
        if ok2:
            unew = _post(field.u + dt * k2)
            _, _, _, ok3 = _rhs(unew)
            if ok3 and np.all(unew > 0.0):
                return Field(mesh=mesh, u=unew, t=field.t + dt)
        dt *= 0.5
    raise StepRejectedError(
        f"step at t={field.t:.6g} still failing after {max_retries} halvings")


def stability_bound(field):
    """Largest stable dt multiple: dt_stable = 2/maxD of the rhs bound."""
    _, _, maxD, ok = rhs_field(field)
    return maxD, ok
