"""The boundary cone: convex cross-section, flow domain, conormal data.

The cone is the set of rays through the origin and the points
``(cross-section, 1)`` of the height-1 slice.  Round cross-sections work
in every dimension; general convex cross-sections are supported for
n = 2 as polar graphs ``rho(theta)`` given by a truncated cosine series.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryDomainError, NonConvexConeError
from .minkowski import minkowski_dot

#: a chart point counts as on the boundary within this distance of the
#: cross-section radius along its own direction
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class ConeSpec:
    """Convex cross-section inside the unit ball defining the cone."""

    kind: str                      # "round" | "polar"
    n: int
    rho: float | None = None
    cos_coeffs: tuple = field(default=())

    @staticmethod
    def round(rho, n=2):
        if not 0.0 < rho < 1.0:
            raise ValueError(f"cross-section must lie in the open unit ball, rho={rho}")
        if n < 2:
            raise ValueError(f"dimension n must be >= 2, got {n}")
        return ConeSpec(kind="round", n=int(n), rho=float(rho))

    @staticmethod
    def polar(cos_coeffs):
        """rho(theta) = c0 + sum_m c_m cos(m theta); n = 2 only."""
        c = tuple(float(v) for v in cos_coeffs)
        if len(c) == 0:
            raise ValueError("polar cross-section needs at least the constant term")
        spec = ConeSpec(kind="polar", n=2, cos_coeffs=c)
        r = spec.radius(np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False))
        if r.min() <= 0.0 or r.max() >= 1.0:
            raise ValueError(
                f"cross-section must lie in the open unit ball: rho range "
                f"[{r.min():.6g}, {r.max():.6g}]")
        return spec

    @property
    def is_round(self):
        return self.kind == "round"

    def radius(self, theta):
        if self.is_round:
            return self.rho * np.ones_like(np.asarray(theta, dtype=float))
        theta = np.asarray(theta, dtype=float)
        r = np.full_like(theta, self.cos_coeffs[0])
        for m in range(1, len(self.cos_coeffs)):
            r += self.cos_coeffs[m] * np.cos(m * theta)
        return r

    def radius_derivs(self, theta):
        """(rho, rho', rho'') at the given angles."""
        theta = np.asarray(theta, dtype=float)
        r = np.full_like(theta, self.cos_coeffs[0] if not self.is_round else self.rho)
        d1 = np.zeros_like(theta)
        d2 = np.zeros_like(theta)
        if not self.is_round:
            for m in range(1, len(self.cos_coeffs)):
                c = self.cos_coeffs[m]
                r += c * np.cos(m * theta)
                d1 += -m * c * np.sin(m * theta)
                d2 += -m * m * c * np.cos(m * theta)
        return r, d1, d2

    def curvature(self, theta):
        """Curvature of the cross-section boundary curve (n = 2 form)."""
        r, d1, d2 = self.radius_derivs(theta)
        return (r * r + 2.0 * d1 * d1 - r * d2) / (r * r + d1 * d1) ** 1.5

    def boundary_gamma(self, theta):
        """Outward unit normal of the flow domain at boundary angle theta."""
        theta = float(theta)
        if self.is_round:
            return np.array([np.cos(theta), np.sin(theta)])
        r, d1, _ = self.radius_derivs(theta)
        c, s = np.cos(theta), np.sin(theta)
        g = np.array([d1 * s + r * c, -d1 * c + r * s])
        return g / np.linalg.norm(g)


@dataclass
class BoundarySample:
    """Everything a boundary mesh node needs about the cone at its location."""

    x: np.ndarray            # chart point on the boundary
    gamma: np.ndarray        # outward unit normal of the domain
    w: np.ndarray            # conormal direction gamma - (gamma.x) x
    a_sigma_theta: float     # angular eigenvalue of the cone's A at height 1


def _check_on_boundary(spec, x):
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if spec.n == 2:
        theta = float(np.arctan2(x[1], x[0]))
        target = float(spec.radius(theta))
    else:
        if not spec.is_round:
            raise ValueError("polar cross-sections are n=2 only")
        theta = None
        target = spec.rho
    if abs(r - target) > BOUNDARY_TOL:
        raise BoundaryDomainError(
            f"point at radius {r:.12g} is not on the boundary (radius {target:.12g})")
    return x, theta


def conormal(spec, x):
    """Chart conormal w = gamma - (gamma.x) x at a boundary point."""
    x, theta = _check_on_boundary(spec, x)
    if spec.is_round and theta is None:
        gamma = x / np.linalg.norm(x)
    else:
        gamma = spec.boundary_gamma(theta) if spec.n == 2 else x / np.linalg.norm(x)
    return gamma - float(np.dot(gamma, x)) * x


def angular_second_form(spec, x):
    """Nonzero eigenvalue of the cone's second fundamental form in the
    angular direction, evaluated at the height-1 slice through x.

    The ray direction is always a zero eigenvector; the angular direction
    is the boundary tangent made orthogonal to the ray (indefinite
    Gram-Schmidt), which contributes the 1/(1+c^2) factor below.
    """
    x, theta = _check_on_boundary(spec, x)
    w2 = 1.0 - float(np.dot(x, x))
    if spec.n == 2:
        if theta is None:
            theta = float(np.arctan2(x[1], x[0]))
        kappa = float(self_curvature(spec, theta))
        gamma = spec.boundary_gamma(theta)
        tang = np.array([-gamma[1], gamma[0]])
        c = float(np.dot(tang, x)) / np.sqrt(w2)
        gdotx = float(np.dot(gamma, x))
        return kappa / (np.sqrt(1.0 - gdotx * gdotx) * (1.0 + c * c))
    # round cross-section in higher dimension: every tangent of the
    # sphere is orthogonal to x, so no Gram-Schmidt correction appears
    kappa = 1.0 / spec.rho
    return kappa / np.sqrt(1.0 - spec.rho * spec.rho)


def self_curvature(spec, theta):
    if spec.is_round:
        return 1.0 / spec.rho
    return spec.curvature(np.asarray(theta, dtype=float))


def boundary_sample(spec, x):
    x = np.asarray(x, dtype=float)
    w = conormal(spec, x)
    theta = float(np.arctan2(x[1], x[0])) if spec.n == 2 else None
    gamma = (spec.boundary_gamma(theta) if spec.n == 2
             else x / np.linalg.norm(x))
    return BoundarySample(x=x, gamma=gamma, w=w,
                          a_sigma_theta=angular_second_form(spec, x))


def sigma_A_nu_nu(spec, x, u, nu, tangency_tol=1e-8):
    """Second fundamental form of the cone evaluated on a tangent vector nu.

    nu must be tangent to the cone at the ambient point over x at height
    u.  The ray component of nu contributes nothing; only the angular
    component(s) do.
    """
    x, theta = _check_on_boundary(spec, x)
    nu = np.asarray(nu, dtype=float)
    if nu.size != spec.n + 1:
        raise ValueError(f"nu has dimension {nu.size}, expected {spec.n + 1}")
    w2 = 1.0 - float(np.dot(x, x))
    if u <= 0.0:
        raise ValueError("height u must be positive")
    # tangency check against the cone's outward spacelike unit normal
    gamma = (spec.boundary_gamma(theta) if spec.n == 2
             else x / np.linalg.norm(x))
    gdotx = float(np.dot(gamma, x))
    mu = np.concatenate([gamma, [gdotx]]) / np.sqrt(1.0 - gdotx * gdotx)
    ip = minkowski_dot(nu, mu)
    scale = max(1.0, float(np.max(np.abs(nu))))
    if abs(ip) > tangency_tol * scale:
        raise ValueError(
            f"nu is not tangent to the cone: <nu, mu> = {ip:.3e}")
    ell = u / np.sqrt(w2)

    if spec.n == 2:
        if theta is None:
            theta = float(np.arctan2(x[1], x[0]))
        tang = np.array([-gamma[1], gamma[0]])
        c = float(np.dot(tang, x)) / np.sqrt(w2)
        theta_vec = np.concatenate([tang, [0.0]])
        ray = np.concatenate([x, [1.0]]) / np.sqrt(w2)
        theta_perp = theta_vec + c * ray         # <ray, ray> = -1
        theta_hat = theta_perp / np.sqrt(1.0 + c * c)
        beta = minkowski_dot(nu, theta_hat)
        a_hat = angular_second_form(spec, x) / ell
        return beta * beta * a_hat

    # round, n >= 3: angular part of nu is its spatial component
    # orthogonal to the radial direction
    xhat = x / np.linalg.norm(x)
    nu_sp = nu[:-1]
    nu_ang = nu_sp - float(np.dot(nu_sp, xhat)) * xhat
    a_hat = angular_second_form(spec, x) / ell
    return float(np.dot(nu_ang, nu_ang)) * a_hat


def convexity_check(spec, n_samples=4096):
    """True iff the cross-section boundary has nonnegative curvature.

    Returns (ok, report) with the minimum curvature and its location;
    never raises on a non-convex section.
    """
    if spec.is_round:
        kmin = 1.0 / spec.rho
        return True, {"min_curvature": kmin, "argmin_theta": 0.0,
                      "n_samples": 1}
    theta = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    kappa = spec.curvature(theta)
    i = int(np.argmin(kappa))
    ok = bool(kappa[i] >= 0.0)
    return ok, {"min_curvature": float(kappa[i]),
                "argmin_theta": float(theta[i]),
                "n_samples": n_samples}


def require_convex(spec):
    ok, report = convexity_check(spec)
    if not ok:
        raise NonConvexConeError(
            f"cross-section is not convex: min curvature "
            f"{report['min_curvature']:.6g} at theta={report['argmin_theta']:.6g}")
