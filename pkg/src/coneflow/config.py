"""Run configuration: strict parsing, validation, initial data."""

from dataclasses import dataclass

import numpy as np
import yaml

from . import kernels
from .cone import ConeSpec, convexity_check
from .engine import StepControl
from .errors import ConfigError
from .mesh import Field, build_mesh


_TOP_KEYS = {"n", "cone", "mesh", "time", "initial", "interior_fraction",
             "output"}
_CONE_KEYS = {"type", "rho", "cos_coeffs"}
_MESH_KEYS = {"nr", "ntheta", "axisymmetric"}
_TIME_KEYS = {"t_end", "safety", "dt_min", "dt_max", "snapshot_factor",
              "snapshot_t0"}
_INITIAL_KEYS = {"kind", "k", "a", "m"}
_OUTPUT_KEYS = {"directory", "snapshots"}


@dataclass
class RunConfig:
    n: int
    cone_type: str
    rho: float | None
    cos_coeffs: tuple
    nr: int
    ntheta: int
    axisymmetric: bool
    t_end: float
    safety: float
    dt_min: float
    dt_max: float
    snapshot_factor: float
    snapshot_t0: float
    initial_kind: str
    k: float
    a: float
    m: int
    interior_fraction: float
    out_dir: str
    write_snapshots: bool

    def cone_spec(self):
        if self.cone_type == "round":
            return ConeSpec.round(self.rho, self.n)
        return ConeSpec.polar(self.cos_coeffs)

    def build_mesh(self):
        return build_mesh(self.cone_spec(), self.nr, self.ntheta,
                          axisymmetric=self.axisymmetric)

    def step_control(self):
        return StepControl(t_end=self.t_end, safety=self.safety,
                           dt_min=self.dt_min, dt_max=self.dt_max,
                           snapshot_factor=self.snapshot_factor,
                           snapshot_t0=self.snapshot_t0)

    def initial_field(self, mesh=None):
        if mesh is None:
            mesh = self.build_mesh()
        return Field(mesh=mesh, u=initial_values(self, mesh), t=0.0)


def initial_values(cfg, mesh):
    """Initial height data on the mesh nodes.

    radial_bump: k + a cos(pi sigma), flat at both the origin and the
    boundary, so the Neumann condition holds analytically.
    angular_mode: k + a cos(m theta) xi(sigma) with a polynomial radial
    profile that is smooth at the origin and boundary-flat.
    """
    if cfg.initial_kind == "constant":
        return np.full(mesh.shape, cfg.k)
    if mesh.axisymmetric:
        sig = mesh.sigma
    else:
        sig = mesh.sigma[:, None] * np.ones((1, mesh.ntheta))
    if cfg.initial_kind == "radial_bump":
        return cfg.k + cfg.a * np.cos(np.pi * sig)
    if cfg.initial_kind == "angular_mode":
        m = cfg.m
        xi = 0.5 * (m + 2.0) * sig ** m - 0.5 * m * sig ** (m + 2)
        return cfg.k + cfg.a * np.cos(m * mesh.theta)[None, :] * xi
    raise ValueError(f"unknown initial kind {cfg.initial_kind!r}")


def _check_keys(d, allowed, where, violations):
    if not isinstance(d, dict):
        violations.append(f"{where}: expected a mapping")
        return False
    unknown = sorted(set(d) - allowed)
    for k in unknown:
        violations.append(f"{where}: unknown key {k!r}")
    return not unknown


def parse_config(text):
    """Parse and validate a YAML/JSON configuration document.

    Strict: unknown keys are errors, and every violation found is
    reported at once in the raised ConfigError.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError([f"document does not parse: {e}"])
    if not isinstance(raw, dict):
        raise ConfigError(["document must be a mapping"])

    v = []
    _check_keys(raw, _TOP_KEYS, "top level", v)
    cone = raw.get("cone", {})
    mesh = raw.get("mesh", {})
    time = raw.get("time", {})
    init = raw.get("initial", {})
    out = raw.get("output", {})
    for d, keys, where in ((cone, _CONE_KEYS, "cone"),
                           (mesh, _MESH_KEYS, "mesh"),
                           (time, _TIME_KEYS, "time"),
                           (init, _INITIAL_KEYS, "initial"),
                           (out, _OUTPUT_KEYS, "output")):
        _check_keys(d, keys, where, v)
    if v:
        raise ConfigError(v)

    n = raw.get("n", 2)
    if not isinstance(n, int) or n < 2:
        v.append(f"n must be an integer >= 2, got {n!r}")
        n = 2

    cone_type = cone.get("type", "round")
    rho = cone.get("rho")
    coeffs = tuple(cone.get("cos_coeffs", ()))
    if cone_type not in ("round", "polar"):
        v.append(f"cone.type must be round or polar, got {cone_type!r}")
    elif cone_type == "round":
        if rho is None:
            v.append("cone.rho is required for round cones")
        elif not 0.0 < rho < 1.0:
            v.append(f"cross-section must lie in the open unit ball: rho={rho}")
    else:
        if n != 2:
            v.append("polar cross-sections support n=2 only")
        if not coeffs:
            v.append("cone.cos_coeffs is required for polar cones")

    axisym = bool(mesh.get("axisymmetric", False))
    nr = mesh.get("nr", 64)
    ntheta = mesh.get("ntheta", 64)
    if not isinstance(nr, int) or nr < 8:
        v.append(f"mesh.nr must be an integer >= 8, got {nr!r}")
    if not axisym:
        if not isinstance(ntheta, int) or ntheta < 8 or ntheta % 2:
            v.append(f"mesh.ntheta must be an even integer >= 8, got {ntheta!r}")
    if n > 2 and not axisym:
        v.append("n >= 3 requires axisymmetric mode")
    if axisym and cone_type != "round":
        v.append("axisymmetric mode requires a round cone")

    t_end = float(time.get("t_end", 1.0))
    safety = float(time.get("safety", 0.25))
    dt_min = float(time.get("dt_min", 1e-13))
    dt_max = float(time.get("dt_max", 1e9))
    factor = float(time.get("snapshot_factor", 2.0))
    t0 = float(time.get("snapshot_t0", 0.0625))
    if t_end <= 0:
        v.append(f"time.t_end must be positive, got {t_end}")
    if not 0.0 < safety <= 1.0:
        v.append(f"time.safety must be in (0,1], got {safety}")
    if dt_min > dt_max:
        v.append("time.dt_min must not exceed time.dt_max")
    if factor <= 1.0:
        v.append(f"time.snapshot_factor must exceed 1, got {factor}")
    if t0 <= 0.0:
        v.append(f"time.snapshot_t0 must be positive, got {t0}")

    kind = init.get("kind", "constant")
    k = float(init.get("k", 1.0))
    a = float(init.get("a", 0.0))
    m = init.get("m", 1)
    if kind not in ("constant", "radial_bump", "angular_mode"):
        v.append(f"initial.kind must be constant|radial_bump|angular_mode,"
                 f" got {kind!r}")
    if k <= 0.0:
        v.append(f"initial.k must be positive, got {k}")
    if kind != "constant" and abs(a) >= k:
        v.append(f"initial amplitude |a|={abs(a)} must stay below k={k}"
                 " for positivity")
    if kind == "angular_mode":
        if axisym:
            v.append("angular_mode initial data requires the 2-D solver")
        if not isinstance(m, int) or m < 1:
            v.append(f"initial.m must be a positive integer, got {m!r}")

    frac = float(raw.get("interior_fraction", 0.5))
    if not 0.0 < frac < 1.0:
        v.append(f"interior_fraction must be in (0,1), got {frac}")

    out_dir = str(out.get("directory", "out"))
    write_snaps = bool(out.get("snapshots", True))

    cfg = RunConfig(n=n, cone_type=cone_type, rho=rho, cos_coeffs=coeffs,
                    nr=nr, ntheta=int(ntheta), axisymmetric=axisym,
                    t_end=t_end, safety=safety, dt_min=dt_min,
                    dt_max=dt_max, snapshot_factor=factor, snapshot_t0=t0,
                    initial_kind=kind, k=k, a=a,
                    m=m if isinstance(m, int) else 1,
                    interior_fraction=frac, out_dir=out_dir,
                    write_snapshots=write_snaps)
    if v:
        raise ConfigError(v)

    # geometric validation: convexity, then spacelikeness of the data
    try:
        spec = cfg.cone_spec()
    except ValueError as e:
        raise ConfigError([str(e)])
    ok, rep = convexity_check(spec)
    if not ok:
        raise ConfigError(
            [f"cross-section is not convex: min curvature "
             f"{rep['min_curvature']:.6g} at theta={rep['argmin_theta']:.6g}"])
    mesh_obj = cfg.build_mesh()
    field = cfg.initial_field(mesh_obj)
    g = kernels.geometry_fields(field)
    if not g["ok"]:
        bad = np.argwhere(~g["node_ok"])[0]
        if mesh_obj.axisymmetric:
            loc = f"node {int(bad[0])} (r={mesh_obj.r[int(bad[0])]:.6g})"
        else:
            i, j = int(bad[0]), int(bad[1])
            loc = (f"node ({i},{j}) at x=({mesh_obj.x1[i, j]:.6g},"
                   f" {mesh_obj.x2[i, j]:.6g})")
        raise ConfigError(
            [f"initial data is not spacelike at {loc}: v^2 <= 0"])
    return cfg
