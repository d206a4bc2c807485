"""Pointwise geometry of a spacelike graph over the unit-ball chart.

Everything here is a pure function of a :class:`Jet` (value, gradient and
optional Hessian of the height function at one chart point).  These are
the reference implementations; the mesh kernels reproduce the same
formulas in vectorized/compiled form and are tested against this module.

Sign conventions, fixed once:

* the unit normal is future pointing, so ``minkowski_dot(nu, nu) = -1``
  and ``minkowski_dot(F, nu) = -S`` with ``S = u^2/(v sqrt(1-|x|^2)) > 0``;
* the second fundamental form is oriented so that the expanding
  homothetic surface (constant u) has mean curvature ``H = n/u > 0``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import LightConeError, SpacelikeViolationError
from .minkowski import embed, minkowski_dot


@dataclass
class Jet:
    """Chart point with height value, gradient and optional Hessian."""

    x: np.ndarray
    u: float
    du: np.ndarray
    d2u: np.ndarray | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.du = np.asarray(self.du, dtype=float)
        if self.d2u is not None:
            self.d2u = np.asarray(self.d2u, dtype=float)
        r2 = float(np.dot(self.x, self.x))
        if r2 >= 1.0:
            raise LightConeError(f"jet at |x|={np.sqrt(r2):.6g} >= 1")
        if self.u <= 0.0:
            raise ValueError(f"jet height u={self.u:.6g} must be positive")

    @property
    def n(self):
        return self.x.size

    @property
    def w2(self):
        """1 - |x|^2, positive inside the chart."""
        return 1.0 - float(np.dot(self.x, self.x))


@dataclass
class NodeGeometry:
    """All pointwise quantities derived from one jet."""

    F2: float
    v: float
    S: float
    metric: np.ndarray
    inv_metric: np.ndarray
    normal: np.ndarray
    H: float
    A2: float
    J: float


def gradient_function_v(jet):
    """Spacelikeness measure v > 0; raises if the jet is not spacelike."""
    w2 = jet.w2
    dux = float(np.dot(jet.du, jet.x))
    v2 = jet.u * jet.u / w2 + dux * dux - float(np.dot(jet.du, jet.du))
    if v2 <= 0.0:
        raise SpacelikeViolationError(
            f"v^2 = {v2:.6g} <= 0 at x={jet.x}, u={jet.u:.6g}")
    return float(np.sqrt(v2))


def metric(jet):
    """Induced metric g_ij in chart coordinates (symmetric positive definite)."""
    gradient_function_v(jet)  # spacelike gate
    w2 = jet.w2
    x = jet.x
    du = jet.du
    a = jet.u * jet.u / w2
    g = a * (np.eye(jet.n) + np.outer(x, x) / w2) - np.outer(du, du)
    return g


def inverse_metric(jet):
    """Closed-form inverse of the induced metric (not a numeric inversion)."""
    v = gradient_function_v(jet)
    v2 = v * v
    w2 = jet.w2
    x = jet.x
    du = jet.du
    duu = float(np.dot(du, du))
    dux = float(np.dot(du, x))
    core = ((duu - jet.u * jet.u / w2) * np.outer(x, x)
            + np.outer(du, du)
            - dux * (np.outer(x, du) + np.outer(du, x)))
    return (w2 / (jet.u * jet.u)) * (np.eye(jet.n) + core / v2)


def normal(jet):
    """Future-pointing unit timelike normal to the graph."""
    v = gradient_function_v(jet)
    w2 = jet.w2
    dux = float(np.dot(jet.du, jet.x))
    out = np.empty(jet.n + 1)
    out[:-1] = (w2 * jet.du + jet.u * jet.x) / (w2 * v)
    out[-1] = (dux * w2 + jet.u) / (w2 * v)
    return out


def support_S(jet):
    """Support scalar S = u^2 / (v sqrt(1-|x|^2)); equals -<F, nu>."""
    v = gradient_function_v(jet)
    return jet.u * jet.u / (v * np.sqrt(jet.w2))


def second_fundamental_form(jet):
    """h_ij from the embedding's second derivatives contracted with the normal.

    Oriented so that constant-height jets give h = g/u (hence H = n/u).
    """
    if jet.d2u is None:
        raise ValueError("second_fundamental_form requires a Hessian")
    v = gradient_function_v(jet)
    w2 = jet.w2
    u = jet.u
    x = jet.x
    du = jet.du
    h = (u * jet.d2u
         - 2.0 * np.outer(du, du)
         - (u / w2) * (np.outer(x, du) + np.outer(du, x))
         + (u * u / (w2 * w2)) * np.outer(x, x)
         + (u * u / w2) * np.eye(jet.n))
    return h / (np.sqrt(w2) * v)


def shape_operator(jet):
    """Mean curvature H and squared norm |A|^2 of the shape operator."""
    h = second_fundamental_form(jet)
    ginv = inverse_metric(jet)
    M = ginv @ h
    H = float(np.trace(M))
    A2 = float(np.trace(M @ M))
    return H, A2


def scale_invariant_J(jet):
    """J = (S^2 - F^2)/F^2 >= 0, zero exactly where the height gradient vanishes."""
    v = gradient_function_v(jet)
    duu = float(np.dot(jet.du, jet.du))
    dux = float(np.dot(jet.du, jet.x))
    return (duu - dux * dux) / (v * v)


def node_geometry(jet):
    """Bundle every pointwise quantity; requires a Hessian."""
    v = gradient_function_v(jet)
    H, A2 = shape_operator(jet)
    return NodeGeometry(
        F2=jet.u * jet.u,
        v=v,
        S=support_S(jet),
        metric=metric(jet),
        inv_metric=inverse_metric(jet),
        normal=normal(jet),
        H=H,
        A2=A2,
        J=scale_invariant_J(jet),
    )


def embed_jet(jet):
    """Ambient position of the jet's base point."""
    return embed(jet.x, jet.u)


def hyperbolic_cap_area(rho, n):
    """Area of the cap that the round cone of chart radius rho cuts from
    the unit hyperboloid.

    The chart area element of the unit hyperboloid is
    (1-r^2)^(-(n+1)/2), so the cap area reduces to a radial integral.
    n = 2 has the closed form 2*pi*(1/sqrt(1-rho^2) - 1); higher n uses
    adaptive quadrature of the same integrand.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"cross-section radius must be in (0,1), got {rho}")
    if n < 2:
        raise ValueError(f"dimension n must be >= 2, got {n}")
    if n == 2:
        return 2.0 * np.pi * (1.0 / np.sqrt(1.0 - rho * rho) - 1.0)
    # surface area of the unit (n-1)-sphere
    import math
    sphere = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    val, _ = quad(lambda r: r ** (n - 1) * (1.0 - r * r) ** (-(n + 1) / 2.0),
                  0.0, rho, epsabs=1e-13, epsrel=1e-12)
    return sphere * val


def _fd_tangent(jet, i, h=1e-6):
    """Finite-difference tangent d(embed)/dx_i; used only by tests."""
    xp = jet.x.copy()
    xm = jet.x.copy()
    xp[i] += h
    xm[i] -= h
    up = jet.u + h * jet.du[i]
    um = jet.u - h * jet.du[i]
    if jet.d2u is not None:
        up += 0.5 * h * h * jet.d2u[i, i]
        um += 0.5 * h * h * jet.d2u[i, i]
    return (embed(xp, up) - embed(xm, um)) / (2.0 * h)
