"""Time integration: stability control, stepping, and full runs."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SpacelikeViolationError, StepRejectedError, StiffnessError
from .mesh import Field, require_spacelike


@dataclass
class StepControl:
    """Adaptive explicit stepping parameters and output cadence."""

    t_end: float
    safety: float = 0.25
    dt_min: float = 1e-13
    dt_max: float = 1e9
    snapshot_factor: float = 2.0
    snapshot_t0: float = 0.0625
    max_retries: int = 10
    extra_times: tuple = ()

    def __post_init__(self):
        if not 0.0 < self.safety <= 1.0:
            raise ValueError(f"safety must be in (0, 1], got {self.safety}")
        if self.dt_min > self.dt_max:
            raise ValueError("dt_min must not exceed dt_max")
        if self.snapshot_factor <= 1.0:
            raise ValueError("snapshot_factor must exceed 1")

    def snapshot_times(self):
        """0, then snapshot_t0 * factor^k, closed with t_end."""
        times = [0.0]
        tk = self.snapshot_t0
        while tk < self.t_end * (1.0 - 1e-12):
            times.append(tk)
            tk *= self.snapshot_factor
        times.append(self.t_end)
        for t in self.extra_times:
            if 0.0 < t < self.t_end and not any(
                    abs(t - s) <= 1e-9 * max(1.0, t) for s in times):
                times.append(t)
        return sorted(times)


@dataclass
class ParabolicityReport:
    """The quantities whose bounds control uniform parabolicity."""

    max_inv_v2: float
    max_inv_u2: float
    max_u2: float
    min_v: float
    min_u: float

    @staticmethod
    def from_field(field):
        g = kernels.geometry_fields(field)
        v = g["v"]
        u = field.u
        return ParabolicityReport(
            max_inv_v2=float(np.max(1.0 / (v * v))),
            max_inv_u2=float(np.max(1.0 / (u * u))),
            max_u2=float(np.max(u * u)),
            min_v=float(np.min(v)),
            min_u=float(np.min(u)),
        )


def rhs(field):
    """Right-hand side of the flow at every node, plus the curvature
    readout H = rhs * u / (v sqrt(1-|x|^2)).  Aborts with the node
    location on a spacelike violation.
    """
    require_spacelike(field)
    vals, hrhs, _, _ = kernels.rhs_field(field)
    return vals, hrhs


def stable_dt(field, ctl):
    """Largest admissible explicit step for this field.

    safety * 2/maxD where maxD bounds the discrete operator; raises a
    stiffness error (with the parabolicity report attached) if the
    result falls below dt_min.
    """
    maxD, ok = kernels.stability_bound(field)
    if not ok:
        raise SpacelikeViolationError(
            f"field is not spacelike at t={field.t:.6g}")
    dt = ctl.safety * 2.0 / maxD
    if dt < ctl.dt_min:
        raise StiffnessError(
            f"stable dt {dt:.3e} below dt_min {ctl.dt_min:.3e}",
            report=ParabolicityReport.from_field(field))
    return min(dt, ctl.dt_max)


def step(field, dt, max_retries=10):
    """One explicit midpoint step; see kernels.step_field."""
    return kernels.step_field(field, dt, max_retries=max_retries)


def _advance_checked(field, target, ctl):
    new, steps, status, dt = kernels.advance_field(
        field, target, ctl.safety, ctl.dt_min, ctl.dt_max, ctl.max_retries)
    if status == kernels.STATUS_OK:
        return new, steps, dt
    report = None
    try:
        report = ParabolicityReport.from_field(new)
    except Exception:
        pass
    msg = (f"run halted at t={new.t:.6g} ({kernels.STATUS_NAMES[status]}); "
           f"parabolicity: {report}")
    if status == kernels.STATUS_STIFF:
        raise StiffnessError(msg, report=report)
    if status == kernels.STATUS_SPACELIKE:
        raise SpacelikeViolationError(msg)
    raise StepRejectedError(msg)


def run(field0, ctl, diagnose=None, on_snapshot=None):
    """Advance to t_end, producing one trajectory entry per snapshot time.

    diagnose(field) -> record is evaluated at every snapshot (including
    t = 0 and t_end); on_snapshot(field, record) streams results out.
    Returns the list of (field, record) pairs.
    """
    require_spacelike(field0)
    if np.any(field0.u <= 0.0):
        raise ValueError("initial data must be positive")
    field = field0
    total_steps = 0
    traj = []
    for target in ctl.snapshot_times():
        if target > field.t:
            field, steps, _ = _advance_checked(field, target, ctl)
            total_steps += steps
        rec = diagnose(field) if diagnose is not None else None
        if rec is not None:
            rec.steps = total_steps
        traj.append((field, rec))
        if on_snapshot is not None:
            on_snapshot(field, rec)
    return traj


def run_axisymmetric(field0, ctl, diagnose=None, on_snapshot=None):
    """Radial solve for round cones (the only path for n >= 3); shares
    the full tensor right-hand side evaluated on radial jets.
    """
    if not field0.mesh.axisymmetric:
        raise ValueError("run_axisymmetric requires an axisymmetric mesh")
    return run(field0, ctl, diagnose=diagnose, on_snapshot=on_snapshot)


def homothetic_height(k, n, t):
    """Exact height of the expanding solution started at constant k."""
    return np.sqrt(k * k + 2.0 * n * t)


def homothetic_trajectory(mesh, k, ctl, diagnose=None, on_snapshot=None):
    """The exact expanding solution sampled at the snapshot times."""
    traj = []
    for tk in ctl.snapshot_times():
        u = np.full(mesh.shape, homothetic_height(k, mesh.n, tk))
        field = Field(mesh=mesh, u=u, t=tk)
        rec = diagnose(field) if diagnose is not None else None
        traj.append((field, rec))
        if on_snapshot is not None:
            on_snapshot(field, rec)
    return traj
