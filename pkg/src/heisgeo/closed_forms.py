"""Closed forms for two model surfaces: the plane {t = 0} in the normal
coordinates (R, alpha, beta) and the unit CC sphere in the (u, phi) chart.

Both are used as regression fixtures for the general machinery.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .curvature import build_report
from .errors import InvalidArgument, SingularConfigurationError
from .geodesic import origin_geodesic
from .group import HVec, Point

# ---------------------------------------------------------------------------
# the plane t = 0

_BETA_EDGE = 1e-12


@dataclass(frozen=True)
class PlaneCoords:
    """delta_Pi = R beta; beta is the signed arclength of the metric normal over R."""

    R: float
    alpha: float
    beta: float

    def __post_init__(self):
        if self.R < 0:
            raise InvalidArgument("R must be nonnegative")
        if not abs(self.beta) < math.pi / 2:
            raise InvalidArgument("beta must lie in (-pi/2, pi/2)")
        object.__setattr__(self, "alpha", math.fmod(self.alpha, 2 * math.pi) % (2 * math.pi))

    def to_point(self):
        R, a, b = self.R, self.alpha, self.beta
        return Point(R * math.cos(b) * math.cos(a), R * math.cos(b) * math.sin(a),
                     R * R * (b + 0.5 * math.sin(2 * b)))

    @property
    def delta(self):
        return self.R * self.beta

    @classmethod
    def from_point(cls, p):
        """Inverse of to_point, away from the t-axis."""
        x, y, t = (float(c) for c in p)
        rho = math.hypot(x, y)
        if rho == 0:
            raise SingularConfigurationError("the t-axis is not covered by plane coordinates")
        mu = t / (rho * rho)

        def ratio(b):
            # s / (R cos beta)^2, increasing in beta
            return (b + 0.5 * math.sin(2 * b)) / math.cos(b) ** 2 - mu

        lim = math.pi / 2 - 1e-15
        if mu == 0:
            beta = 0.0
        else:
            beta = brentq(ratio, -lim, lim, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=400)
        return cls(rho / math.cos(beta), math.atan2(y, x), beta)


def _plane_den(c):
    if c.R == 0:
        raise SingularConfigurationError("plane coordinates are singular at R = 0")
    return math.cos(c.beta) + c.beta * math.sin(c.beta)


def plane_frame_coefficients(c):
    """Rows: X and Y written in the coordinate fields (d_R, d_alpha, d_beta)."""
    R, a, b = c.R, c.alpha, c.beta
    den = _plane_den(c)
    cb = math.cos(b)
    X = (cb * math.cos(b - a) / den, -math.sin(a) / (R * cb),
         -(b * math.cos(a) + cb * math.sin(b - a)) / (R * den))
    Y = (-cb * math.sin(b - a) / den, math.cos(a) / (R * cb),
         -(b * math.sin(a) + cb * math.cos(b - a)) / (R * den))
    return np.array([X, Y])


def plane_coords_jacobian(c):
    """d(u, v, s)/d(R, alpha, beta)."""
    R, a, b = c.R, c.alpha, c.beta
    ca, sa, cb, sb = math.cos(a), math.sin(a), math.cos(b), math.sin(b)
    return np.array([
        [ca * cb, -R * cb * sa, -R * sb * ca],
        [cb * sa, R * cb * ca, -R * sb * sa],
        [2 * R * (b + 0.5 * math.sin(2 * b)), 0.0, 2 * R * R * cb * cb],
    ])


def plane_grad_delta(c):
    """(X delta_Pi, Y delta_Pi) = (-sin(beta - alpha), -cos(beta - alpha))."""
    if c.R == 0:
        raise SingularConfigurationError("the gradient of delta_Pi is undefined on the t-axis")
    d = c.beta - c.alpha
    return -math.sin(d), -math.cos(d)


def plane_A(c):
    """First-column factor of the plane Hessian.

    The sign of the beta cos(alpha + beta) term is the one produced by applying
    the X field to X delta_Pi, confirmed against the finite-difference oracle;
    ``plane_A_flipped`` has the opposite sign there, for comparison.
    """
    a, b = c.alpha, c.beta
    return -(math.sin(a) * math.cos(b) - b * math.cos(a + b) + math.cos(b) ** 2 * math.sin(a - b))


def plane_A_flipped(c):
    a, b = c.alpha, c.beta
    return -(math.sin(a) * math.cos(b) + b * math.cos(a + b) + math.cos(b) ** 2 * math.sin(a - b))


def plane_B(c):
    a, b = c.alpha, c.beta
    return math.cos(a) * math.cos(b) + b * math.sin(a + b) + math.cos(b) ** 2 * math.cos(a - b)


def plane_hessian(c, A=None):
    """[[cos(a-b) A, cos(a-b) B], [sin(a-b) A, sin(a-b) B]] / (R cos b (cos b + b sin b))."""
    if math.pi / 2 - abs(c.beta) < _BETA_EDGE:
        raise SingularConfigurationError("the plane Hessian diverges as beta -> +-pi/2")
    den = c.R * math.cos(c.beta) * _plane_den(c)
    A = plane_A(c) if A is None else A
    B = plane_B(c)
    ca, sa = math.cos(c.alpha - c.beta), math.sin(c.alpha - c.beta)
    return np.array([[ca * A, ca * B], [sa * A, sa * B]]) / den


def plane_yy_alpha0(R, beta):
    """YY delta_Pi along alpha = 0: -(tan b / R)(1 + cos^3 b / (cos b + b sin b))."""
    cb = math.cos(beta)
    return -(math.tan(beta) / R) * (1 + cb ** 3 / (cb + beta * math.sin(beta)))


def plane_metric_normal(x, y, sigma):
    """Metric normal to {t = 0} at (x, y, 0)."""
    m = math.hypot(x, y)
    if m == 0:
        raise SingularConfigurationError("the origin of the plane is characteristic")
    w = 2 * np.asarray(sigma, dtype=float) / m
    c, s = np.cos(w), np.sin(w)
    out = np.stack([0.5 * x * (1 + c) + 0.5 * y * s, 0.5 * y * (1 + c) - 0.5 * x * s,
                    0.5 * m * m * (w + s)], -1)
    return Point.of(out) if out.ndim == 1 else out


# ---------------------------------------------------------------------------
# the unit CC sphere, upper half


@dataclass(frozen=True)
class SphereParam:
    u: float
    phi: float

    def __post_init__(self):
        if not 0 < self.u < 2 * math.pi:
            raise InvalidArgument("sphere parameter u must lie in (0, 2 pi)")

    @property
    def v(self):
        return self.u / 2


def sphere_point(sp):
    u, phi = sp.u, sp.phi
    rho = 2 * math.sin(u / 2) / u
    return Point(rho * math.cos(phi), rho * math.sin(phi), 2 * (u - math.sin(u)) / u ** 2)


NORTH_POLE = Point(0.0, 0.0, 1 / math.pi)
SOUTH_POLE = Point(0.0, 0.0, -1 / math.pi)


def _psi_prime_series(p):
    p2 = p * p
    return -1 / 3 + p2 * (4 / 45 + p2 * (4 / 315 + p2 * 8 / 4725))


def psi_prime(p):
    """cot^2 p - cot p / p, with its series below |p| = 1e-2."""
    if abs(p) < 1e-2:
        return _psi_prime_series(p)
    c = math.cos(p) / math.sin(p)
    return c * c - c / p


def psi(p):
    """Integral of psi_prime from 0; finite for |p| < pi."""
    if not abs(p) < math.pi:
        raise SingularConfigurationError("psi diverges at p = +-pi (the poles)")
    val, _ = quad(psi_prime, 0.0, p, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


@dataclass(frozen=True)
class Ruling:
    u: np.ndarray
    points: np.ndarray
    truncated: bool = False


def sphere_ruling(theta, u_range, step):
    """Samples of the horizontal curve z = e^{i(psi(u/2) + theta)} 2 sin(u/2)/u,
    t = 2(u - sin u)/u^2 for u in u_range. The range is clipped away from the
    poles (truncated=True when that happens)."""
    u0, u1 = float(u_range[0]), float(u_range[1])
    if step <= 0 or u1 < u0:
        raise InvalidArgument("need step > 0 and an increasing range")
    edge = 1e-3
    lo, hi = max(u0, -2 * math.pi + edge), min(u1, 2 * math.pi - edge)
    truncated = (lo, hi) != (u0, u1)
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    us = lo + step * np.arange(n)
    # cumulative integration between consecutive samples
    ps = us / 2
    angles = np.empty(n)
    angles[0] = psi(ps[0])
    for k in range(1, n):
        inc, _ = quad(psi_prime, ps[k - 1], ps[k], epsabs=1e-15, epsrel=1e-13)
        angles[k] = angles[k - 1] + inc
    rho = np.array([2 * math.sin(u / 2) / u if u != 0 else 1.0 for u in us])
    t = np.array([2 * (u - math.sin(u)) / u ** 2 if u != 0 else 0.0 for u in us])
    ang = angles + theta
    pts = np.stack([rho * np.cos(ang), rho * np.sin(ang), t], -1)
    return Ruling(us, pts, truncated)


def sphere_mean_curvature(u):
    """h on the unit sphere at parameter u:
    (u cos u - sin u) / ((u/2) cos(u/2) - sin(u/2)) * u / (4 sin(u/2)).
    Below u = 1e-2 the Taylor series 4 - 2u^2/15 - 11u^4/6300 is used."""
    u = float(u)
    if not 0 <= u < 2 * math.pi:
        raise SingularConfigurationError("h_Sigma is defined for 0 <= u < 2 pi")
    if u < 1e-2:
        u2 = u * u
        return 4 - 2 * u2 / 15 - 11 * u2 * u2 / 6300
    v = u / 2
    return (u * math.cos(u) - math.sin(u)) / (v * math.cos(v) - math.sin(v)) * u / (4 * math.sin(v))


def sphere_first_order(sp):
    """(Xf, Yf) = ((2/v) cos(phi - v), (2/v) sin(phi - v)), |grad_H f| = 2/v."""
    v = sp.v
    return (2 / v) * math.cos(sp.phi - v), (2 / v) * math.sin(sp.phi - v)


# candidates for the imaginary curvature of the sphere; "u" is what
# 4 d_t g / |grad_H g| gives with |grad_H g| = 4/u, and is the one the
# finite-difference oracle confirms
SPHERE_P_CANDIDATES = {"u": lambda u: u, "2u": lambda u: 2 * u}
SPHERE_P = "u"


def sphere_hessian(sp, p_choice=SPHERE_P):
    """Factored Hessian v (x) v (h I + p J) with v = sin(phi - v) X - cos(phi - v) Y."""
    P = sphere_point(sp)
    d = sp.phi - sp.v
    vec = HVec(P, math.sin(d), -math.cos(d))
    nrm = HVec(P, math.cos(d), math.sin(d))
    h = sphere_mean_curvature(sp.u)
    p = SPHERE_P_CANDIDATES[p_choice](sp.u)
    q = h * (2 / sp.v) ** 3
    return build_report(P, q, h, p, vec, nrm)


def sphere_metric_normal(sp, sigma):
    """The radial geodesic through the point, continued: O . gamma(1 + sigma)."""
    alpha = sp.phi + sp.u / 2
    return origin_geodesic(alpha, sp.u, 1.0 + np.asarray(sigma, dtype=float))
