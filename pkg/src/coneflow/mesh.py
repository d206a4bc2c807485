"""Polar-type mesh on the flow domain, fields, stencils and quadrature.

Layout (2-D): rays at uniform angles theta_j, nodes along each ray at
sigma_i = (i + 1/2) * dsig with dsig = 1/(Nr - 1/2), physical radius
r = sigma * rho(theta).  The innermost ring sits at half a spacing from
the origin; the outermost ring lands exactly on the boundary (the last
radial cell is a half cell whose node is its outer edge).

Derivatives are taken with second-order centered differences in the
(sigma, theta) grid and converted to Cartesian components through
precomputed chain-rule coefficient arrays.  Two closures supply the
missing neighbors:

* across the origin, a least-squares quadratic fit over the first two
  rings is evaluated at the antipodal half-spacing points;
* outside the boundary, a ghost ring enforcing the discrete Neumann
  condition along the conormal (plain mirror reflection on round cones).

Rings too close to the origin to support the full angular resolution
are projected onto their resolvable azimuthal modes after every stage
(classic polar-cap treatment); this keeps the explicit time-step bound
proportional to the radial spacing squared instead of the innermost
angular arc squared.  The projection leaves angularly constant data
unchanged, reproduces polynomials through the retained modes, and only
removes content that decays like r^m toward the origin.
"""

from dataclasses import dataclass, field as dc_field
from math import gamma as gamma_fn

import numpy as np

from .cone import ConeSpec, boundary_sample, require_convex
from .errors import SpacelikeViolationError


def _sphere_area(n):
    """Surface area of the unit (n-1)-sphere in R^n."""
    return 2.0 * np.pi ** (n / 2.0) / gamma_fn(n / 2.0)


def _filter_cutoff(i, ntheta):
    """Highest azimuthal mode retained at ring i.

    The cap keeps the filtered angular stiffness (m/r)^2 at or below the
    radial stiffness 4/dr^2, so the explicit step is radially limited.
    """
    return min(ntheta // 2, max(1, int(np.floor(0.5 * np.pi * (i + 0.5)))))


def _filter_matrix(m_max, ntheta):
    """Sharp azimuthal projection keeping modes |m| <= m_max (row sums 1)."""
    dth = 2.0 * np.pi / ntheta
    j = np.arange(ntheta)
    diff = dth * (j[:, None] - j[None, :])
    P = np.ones((ntheta, ntheta))
    for m in range(1, m_max + 1):
        P += 2.0 * np.cos(m * diff)
    P /= ntheta
    P -= (P.sum(axis=1, keepdims=True) - 1.0) / ntheta
    return P


@dataclass
class Mesh2D:
    spec: ConeSpec
    nr: int
    ntheta: int
    dsig: float
    dth: float
    sigma: np.ndarray          # (nr,)
    theta: np.ndarray          # (ntheta,)
    x1: np.ndarray             # (nr, ntheta) node coordinates
    x2: np.ndarray
    r: np.ndarray
    w2: np.ndarray             # 1 - r^2
    weights: np.ndarray        # quadrature weights, exact cell areas
    # chain-rule coefficients, (nr, ntheta) each
    sx: np.ndarray
    sy: np.ndarray
    tx: np.ndarray
    ty: np.ndarray
    sxx: np.ndarray
    sxy: np.ndarray
    syy: np.ndarray
    txx: np.ndarray
    txy: np.ndarray
    tyy: np.ndarray
    gcoef: np.ndarray          # (ntheta,) ghost closure coefficients
    wv: np.ndarray             # (ntheta, 2*ntheta) origin fit evaluation
    n_filt: int
    filt: np.ndarray           # (n_filt, ntheta, ntheta)
    kappa_theta: np.ndarray    # (nr,) angular operator bound after filtering
    boundary_samples: list = dc_field(default_factory=list)

    @property
    def n(self):
        return 2

    @property
    def axisymmetric(self):
        return False

    @property
    def shape(self):
        return (self.nr, self.ntheta)

    @property
    def n_nodes(self):
        return self.nr * self.ntheta

    def node_xy(self):
        """Flattened (n_nodes, 2) coordinates in node-id order."""
        return np.stack([self.x1.ravel(), self.x2.ravel()], axis=1)

    def geo(self):
        """Array bundle handed to the kernels."""
        return (self.x1, self.x2, self.w2, self.sx, self.sy, self.tx,
                self.ty, self.sxx, self.sxy, self.syy, self.txx, self.txy,
                self.tyy)


@dataclass
class Mesh1D:
    """Radial mesh for the axisymmetric reduction (round cones, any n)."""

    spec: ConeSpec
    nr: int
    dsig: float
    sigma: np.ndarray
    r: np.ndarray
    w2: np.ndarray
    weights: np.ndarray

    @property
    def n(self):
        return self.spec.n

    @property
    def axisymmetric(self):
        return True

    @property
    def shape(self):
        return (self.nr,)

    @property
    def n_nodes(self):
        return self.nr

    def node_xy(self):
        out = np.zeros((self.nr, self.n))
        out[:, 0] = self.r
        return out


def build_mesh(spec, nr, ntheta=None, axisymmetric=False):
    """Discretize the flow domain of a convex cone.

    Rejects non-convex cross-sections.  ntheta is ignored in
    axisymmetric mode, which is also the only mode for n >= 3.
    """
    require_convex(spec)
    if nr < 8:
        raise ValueError(f"nr must be >= 8, got {nr}")
    if axisymmetric or spec.n != 2:
        if not spec.is_round:
            raise ValueError("axisymmetric mode requires a round cone")
        if spec.n != 2 and not axisymmetric:
            raise ValueError("n >= 3 supports only the axisymmetric mode")
        return _build_mesh_1d(spec, nr)
    if ntheta is None or ntheta < 8:
        raise ValueError(f"ntheta must be >= 8, got {ntheta}")
    if ntheta % 2 != 0:
        raise ValueError("ntheta must be even")
    return _build_mesh_2d(spec, nr, ntheta)


def _build_mesh_1d(spec, nr):
    dsig = 1.0 / (nr - 0.5)
    sigma = (np.arange(nr) + 0.5) * dsig
    sigma[-1] = 1.0
    r = sigma * spec.rho
    w2 = 1.0 - r * r
    edges = np.concatenate([np.arange(nr) * dsig, [1.0]]) * spec.rho
    n = spec.n
    weights = _sphere_area(n) * (edges[1:] ** n - edges[:-1] ** n) / n
    return Mesh1D(spec=spec, nr=nr, dsig=dsig, sigma=sigma, r=r, w2=w2,
                  weights=weights)


def _build_mesh_2d(spec, nr, ntheta):
    dsig = 1.0 / (nr - 0.5)
    dth = 2.0 * np.pi / ntheta
    sigma = (np.arange(nr) + 0.5) * dsig
    sigma[-1] = 1.0           # guard against roundoff; boundary ring exact
    theta = np.arange(ntheta) * dth
    rho, drho, ddrho = spec.radius_derivs(theta)
    cth, sth = np.cos(theta), np.sin(theta)

    S = sigma[:, None]
    r = S * rho[None, :]
    x1 = r * cth[None, :]
    x2 = r * sth[None, :]
    w2 = 1.0 - r * r
    if np.any(w2 <= 0.0):
        raise ValueError("mesh node outside the unit ball")

    # first-derivative chain coefficients; sigma_x, sigma_y depend on
    # theta only, theta_x, theta_y fall off like 1/r
    A = (drho * sth + rho * cth) / rho ** 2
    B = (rho * sth - drho * cth) / rho ** 2
    dA = ((ddrho * sth + 2.0 * drho * cth - rho * sth) / rho ** 2
          - 2.0 * drho * (drho * sth + rho * cth) / rho ** 3)
    dB = ((2.0 * drho * sth + rho * cth - ddrho * cth) / rho ** 2
          - 2.0 * drho * (rho * sth - drho * cth) / rho ** 3)

    ones = np.ones((nr, 1))
    sx = ones * A[None, :]
    sy = ones * B[None, :]
    tx = -sth[None, :] / (S * rho[None, :])
    ty = cth[None, :] / (S * rho[None, :])

    sxx = dA[None, :] * tx
    sxy = dA[None, :] * ty
    syy = dB[None, :] * ty
    # d/dsigma and d/dtheta of theta_x = -s/(sigma rho), theta_y = c/(sigma rho)
    p = sth[None, :] / (S * S * rho[None, :])
    q = (-cth[None, :] / (S * rho[None, :])
         + sth[None, :] * drho[None, :] / (S * rho[None, :] ** 2))
    txx = p * sx + q * tx
    txy = p * sy + q * ty
    p2 = -cth[None, :] / (S * S * rho[None, :])
    q2 = (-sth[None, :] / (S * rho[None, :])
          - cth[None, :] * drho[None, :] / (S * rho[None, :] ** 2))
    tyx = p2 * sx + q2 * tx
    tyy = p2 * sy + q2 * ty
    # mixed second derivatives agree analytically; average out roundoff
    sym_gap = np.max(np.abs(txy - tyx))
    if sym_gap > 1e-8 * np.max(np.abs(txy) + np.abs(tyx)):
        raise AssertionError(f"chain-rule symmetry broken: {sym_gap:.3e}")
    txy = 0.5 * (txy + tyx)

    edges = np.concatenate([np.arange(nr) * dsig, [1.0]])
    cell = (edges[1:] ** 2 - edges[:-1] ** 2)[:, None] / 2.0
    weights = cell * (rho ** 2)[None, :] * dth

    # Neumann ghost closure: du/dw = a u_sigma + b u_theta at the boundary
    gcoef = np.empty(ntheta)
    samples = []
    for j in range(ntheta):
        xb = np.array([x1[-1, j], x2[-1, j]])
        bs = boundary_sample(spec, xb)
        a = bs.w[0] * sx[-1, j] + bs.w[1] * sy[-1, j]
        b = bs.w[0] * tx[-1, j] + bs.w[1] * ty[-1, j]
        if a <= 0.0:
            raise AssertionError("conormal has no outward radial component")
        gcoef[j] = dsig * b / (a * dth)
        samples.append(bs)

    # least-squares quadratic over rings 0-1, evaluated across the origin
    pts = []
    for i in (0, 1):
        for j in range(ntheta):
            pts.append((x1[i, j], x2[i, j]))
    pts = np.array(pts)
    scale = np.max(np.hypot(pts[:, 0], pts[:, 1]))
    design = _quad_monomials(pts / scale)
    fit = np.linalg.pinv(design)                     # (6, 2*ntheta)
    vpts = np.stack([-0.5 * dsig * rho * cth, -0.5 * dsig * rho * sth],
                    axis=1)
    wv = _quad_monomials(vpts / scale) @ fit         # (ntheta, 2*ntheta)
    # rows reproduce constants exactly; applied in mean-centered form
    wv -= (wv.sum(axis=1, keepdims=True) - 1.0) / (2 * ntheta)

    cutoffs = np.array([_filter_cutoff(i, ntheta) for i in range(nr)])
    n_filt = int(np.sum(cutoffs < ntheta // 2))
    n_filt = min(n_filt, nr - 2)     # never filter the boundary closure rings
    cutoffs[n_filt:] = ntheta // 2
    filt = np.stack([_filter_matrix(int(cutoffs[i]), ntheta)
                     for i in range(n_filt)]) if n_filt else \
        np.zeros((0, ntheta, ntheta))
    kappa_theta = 2.0 - 2.0 * np.cos(cutoffs * dth)

    return Mesh2D(spec=spec, nr=nr, ntheta=ntheta, dsig=dsig, dth=dth,
                  sigma=sigma, theta=theta, x1=x1, x2=x2, r=r, w2=w2,
                  weights=weights, sx=sx, sy=sy, tx=tx, ty=ty, sxx=sxx,
                  sxy=sxy, syy=syy, txx=txx, txy=txy, tyy=tyy,
                  gcoef=gcoef, wv=wv, n_filt=n_filt, filt=filt,
                  kappa_theta=kappa_theta, boundary_samples=samples)


def _quad_monomials(p):
    x, y = p[:, 0], p[:, 1]
    return np.stack([np.ones_like(x), x, y, x * x, x * y, y * y], axis=1)


@dataclass
class Field:
    """Height values on a mesh at one time; treated as immutable."""

    mesh: object
    u: np.ndarray
    t: float
    ghost: np.ndarray | None = None     # outer ghost ring (2-D) / value (1-D)
    virtual: np.ndarray | None = None   # across-origin ring / value

    def copy_with(self, u=None, t=None):
        return Field(mesh=self.mesh,
                     u=self.u if u is None else u,
                     t=self.t if t is None else t)


def make_field(mesh, u, t=0.0):
    u = np.asarray(u, dtype=float)
    if u.shape != mesh.shape:
        raise ValueError(f"field shape {u.shape} does not match mesh {mesh.shape}")
    if np.any(u <= 0.0):
        raise ValueError("field must be positive everywhere")
    return Field(mesh=mesh, u=u, t=float(t))


def ghost_values(mesh, u):
    """Outer ghost ring enforcing the discrete Neumann closure."""
    if mesh.axisymmetric:
        return u[-2]
    uth = (np.roll(u[-1], -1) - np.roll(u[-1], 1))
    return u[-2] - mesh.gcoef * uth


def virtual_values(mesh, u):
    """Across-origin values from the quadratic origin fit (even reflection in 1-D)."""
    if mesh.axisymmetric:
        return u[0]
    s = np.concatenate([u[0], u[1]])
    sbar = s.mean()
    return sbar + mesh.wv @ (s - sbar)


def apply_neumann(field):
    """Return the field with ghost and across-origin layers populated.

    Node values are never modified; the closure only supplies the
    neighbors that boundary and innermost-ring stencils need.  Applying
    it twice gives identical layers.
    """
    mesh = field.mesh
    return Field(mesh=mesh, u=field.u, t=field.t,
                 ghost=ghost_values(mesh, field.u),
                 virtual=virtual_values(mesh, field.u))


def neumann_residual_onesided(field):
    """|du/dw| along the unit conormal at each boundary node, from
    interior-only one-sided stencils.

    Measures how well the raw field satisfies the boundary condition,
    independent of the ghost closure.
    """
    mesh = field.mesh
    u = field.u
    if mesh.axisymmetric:
        der = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * mesh.dsig)
        return np.array([abs(der) / mesh.spec.rho])
    us = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * mesh.dsig)
    ut = (np.roll(u[-1], -1) - np.roll(u[-1], 1)) / (2.0 * mesh.dth)
    out = np.empty(mesh.ntheta)
    for j, bs in enumerate(mesh.boundary_samples):
        what = bs.w / np.linalg.norm(bs.w)
        a = what[0] * mesh.sx[-1, j] + what[1] * mesh.sy[-1, j]
        b = what[0] * mesh.tx[-1, j] + what[1] * mesh.ty[-1, j]
        out[j] = abs(a * us[j] + b * ut[j])
    return out


def jets(field):
    """Cartesian derivative arrays (du1, du2, d11, d12, d22) at every node."""
    from . import kernels
    return kernels.jets_2d(field) if not field.mesh.axisymmetric \
        else kernels.jets_1d(field)


def jet_at(field, i, j=None):
    """Pointwise Jet at one node, from the same stencils the solver uses."""
    from .chart import Jet
    mesh = field.mesh
    if mesh.axisymmetric:
        ur, urr = jets(field)
        n = mesh.n
        x = np.zeros(n)
        x[0] = mesh.r[i]
        du = np.zeros(n)
        du[0] = ur[i]
        d2u = np.eye(n) * (ur[i] / mesh.r[i])
        d2u[0, 0] = urr[i]
        return Jet(x=x, u=float(field.u[i]), du=du, d2u=d2u)
    du1, du2, d11, d12, d22 = jets(field)
    x = np.array([mesh.x1[i, j], mesh.x2[i, j]])
    du = np.array([du1[i, j], du2[i, j]])
    d2u = np.array([[d11[i, j], d12[i, j]], [d12[i, j], d22[i, j]]])
    return Jet(x=x, u=float(field.u[i, j]), du=du, d2u=d2u)


def spacelike_ok(field):
    """True if v^2 > 0 at every node (via the solver's stencils)."""
    from . import kernels
    return bool(kernels.geometry_fields(field)["ok"])


def require_spacelike(field):
    from . import kernels
    g = kernels.geometry_fields(field)
    if not g["ok"]:
        bad = np.argwhere(~g["node_ok"])
        loc = tuple(int(v) for v in bad[0])
        raise SpacelikeViolationError(
            f"field is not spacelike at node {loc} (t={field.t:.6g})", node=loc)


def area_graph(field):
    """Graph area by quadrature of the closed-form area element."""
    from . import kernels
    g = kernels.geometry_fields(field)
    if not g["ok"]:
        raise SpacelikeViolationError("field is not spacelike")
    mesh = field.mesh
    n = mesh.n
    dens = field.u ** (n - 1) * g["v"] / mesh.w2 ** (n / 2.0)
    return float(np.sum(mesh.weights * dens))


def area_graph_hyperboloid_route(field):
    """Same area through the unit-hyperboloid chart and the measured
    surface gradient of u^2 (independent contraction through the inverse
    metric); agrees with area_graph up to the algebra the tests pin down.
    """
    from . import kernels
    mesh = field.mesh
    n = mesh.n
    g = kernels.geometry_fields(field)
    if not g["ok"]:
        raise SpacelikeViolationError("field is not spacelike")
    grad2 = g["grad_u_sq"]           # g^{ij} D_i u D_j u
    dens_hyp = field.u ** n / np.sqrt(1.0 + grad2) \
        / mesh.w2 ** ((n + 1) / 2.0)
    return float(np.sum(mesh.weights * dens_hyp))
