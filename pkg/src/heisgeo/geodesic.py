"""Unit-speed CC geodesics and the point-to-point Carnot-Caratheodory distance.

A geodesic leaving the origin with initial direction cos(a) X + sin(a) Y and
curvature parameter phi is

    x(s) = [sin(a)(1 - cos(phi s)) + cos(a) sin(phi s)] / phi
    y(s) = [sin(a) sin(phi s) - cos(a)(1 - cos(phi s))] / phi
    t(s) = 2 (phi s - sin(phi s)) / phi^2

and it minimises length on every interval of length 2 pi / |phi|. The distance
from O to (z, t) is found by inverting the sphere profile: with
theta = phi r / 2, t / |z|^2 = (2 theta - sin 2 theta) / (2 sin^2 theta),
which is odd and strictly increasing on (-pi, pi).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import group
from ._numerics import newton_bisect, sinc, versinc, xsin
from .errors import InvalidArgument
from .group import Point

CENTER_TOL = 1e-9
THETA_TOL = 1e-13


@dataclass(frozen=True)
class Geodesic:
    base: Point
    alpha: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "base", Point.of(self.base))
        object.__setattr__(self, "alpha", float(self.alpha) % (2 * math.pi))

    @property
    def lifetime(self):
        return math.inf if self.phi == 0 else 2 * math.pi / abs(self.phi)

    @property
    def curvature(self):
        return abs(self.phi)

    def eval(self, sigma):
        """Point(s) at arclength ``sigma``; a scalar gives a Point."""
        return group.group_mul(self.base, origin_geodesic(self.alpha, self.phi, sigma))

    __call__ = eval

    def velocity(self, sigma):
        """Horizontal components (a, b) of the velocity; the angle turns at rate -phi."""
        ang = self.alpha - self.phi * np.asarray(sigma, dtype=float)
        return np.cos(ang), np.sin(ang)


def origin_geodesic(alpha, phi, sigma):
    sigma = np.asarray(sigma, dtype=float)
    psi = phi * sigma
    sa, ca = math.sin(alpha), math.cos(alpha)
    vs, sc = versinc(psi), sinc(psi)
    x = sigma * (sa * vs + ca * sc)
    y = sigma * (sa * sc - ca * vs)
    t = 2.0 * sigma * sigma * xsin(psi)
    out = np.stack([x, y, t], axis=-1)
    return group._out(out)


def ball_profile(r, phi):
    """(|z|, t) on the CC sphere of radius r reached with curvature phi, |phi| <= 2 pi / r."""
    if not r > 0:
        raise InvalidArgument(f"radius must be positive, got {r}")
    phi = np.asarray(phi, dtype=float)
    if np.any(np.abs(phi) * r > 2 * math.pi * (1 + 1e-15)):
        raise InvalidArgument(f"|phi| must not exceed 2 pi / r = {2 * math.pi / r}")
    th = phi * r / 2.0
    modz = r * sinc(th)
    t = 2.0 * r * r * xsin(phi * r)
    if modz.ndim == 0:
        return float(modz), float(t)
    return modz, t


def profile_ratio(theta):
    """(2 th - sin 2 th) / (2 sin^2 th) = t / |z|^2 along the profile."""
    theta = np.asarray(theta, dtype=float)
    return 2.0 * xsin(2.0 * theta) / sinc(theta) ** 2


def _profile_ratio_deriv(theta):
    with np.errstate(divide="ignore", invalid="ignore"):
        return 2.0 * (1.0 - profile_ratio(theta) * np.cos(theta) / np.sin(theta))


def _profile_ratio_pair(theta):
    g = profile_ratio(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        return g, 2.0 * (1.0 - g * np.cos(theta) / np.sin(theta))


def solve_profile_angle(mu):
    """theta in [0, pi) with profile_ratio(theta) = mu >= 0."""
    mu = np.asarray(mu, dtype=float)
    with np.errstate(divide="ignore"):
        guess = np.where(mu < 1.0, 1.5 * mu, math.pi - np.sqrt(math.pi / np.maximum(mu, 1.0)))
    return newton_bisect(_profile_ratio_pair, None, mu, 0.0, math.pi, guess, tol=THETA_TOL)


@dataclass(frozen=True)
class DistanceResult:
    distance: float
    phi: float
    alpha: float
    unique: bool


def distance_from_origin(x, y, t):
    """Vectorised core: returns (r, phi, alpha, unique) arrays for the points (x, y, t)."""
    x, y, t = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (x, y, t)))
    modz = np.hypot(x, y)
    abst = np.abs(t)
    sgn = np.sign(t)
    # t = 0 is the straight case however small |z| is, so d = 0 only at the origin
    straight = (t == 0) & (modz > 0)
    center = (modz < CENTER_TOL * np.maximum(1.0, np.sqrt(abst))) & ~straight

    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(center | straight, 0.0, abst / np.where(modz > 0, modz, 1.0) ** 2)
    th = solve_profile_angle(mu)
    # |z| form is stable for theta <= pi/2, the t form near the center
    r_z = modz / sinc(th)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_t = th * np.sqrt(2.0 * abst / (2.0 * th - np.sin(2.0 * th)))
    r = np.where(th <= math.pi / 2, r_z, r_t)
    r = np.where(straight, modz, r)
    r_center = np.sqrt(math.pi * abst)
    r = np.where(center, r_center, r)

    ths = sgn * th
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(r > 0, 2.0 * ths / r, 0.0)
        phi_center = np.where(r_center > 0, 2.0 * math.pi * sgn / r_center, 0.0)
    phi = np.where(center, phi_center, phi)
    phi = np.where(straight, 0.0, phi)
    alpha = np.where(center, 0.0, np.mod(np.arctan2(y, x) + ths, 2 * math.pi))
    unique = ~center | (r == 0)
    return r, phi, alpha, unique


def _radius_only(x, y, t):
    # distance_from_origin without the geodesic parameters; the hot path of the oracle
    modz = np.hypot(x, y)
    abst = np.abs(t)
    center = (modz < CENTER_TOL * np.maximum(1.0, np.sqrt(abst))) & (abst > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(center | (abst == 0), 0.0, abst / np.where(center, 1.0, modz) ** 2)
    th = solve_profile_angle(mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(th <= math.pi / 2, modz / sinc(th),
                     th * np.sqrt(2.0 * abst / (2.0 * th - np.sin(2.0 * th))))
    return np.where(center, np.sqrt(math.pi * abst), r)


def cc_distances(p, q):
    """Distances d(p_i, q_i) for broadcastable arrays of points (…, 3)."""
    w = np.asarray(group.group_mul(group.inverse(p), q), dtype=float)
    return _radius_only(w[..., 0], w[..., 1], w[..., 2])


def cc_distance(p, q):
    """Carnot-Caratheodory distance with the (alpha, phi) of a minimising geodesic p -> q.

    On the center (q directly above or below p) minimisers form a one-parameter
    family; the alpha = 0 member is returned with ``unique=False``.
    """
    w = group.group_mul(group.inverse(p), q)
    r, phi, alpha, unique = distance_from_origin(w.x, w.y, w.t)
    return DistanceResult(float(r), float(phi), float(alpha), bool(unique))


def min_check(g, sigma):
    """Distance between the endpoints of g on [0, sigma]; equals sigma within the lifetime."""
    if not sigma > 0:
        raise InvalidArgument("sigma must be positive")
    return cc_distance(g.eval(0.0), g.eval(sigma)).distance


def connecting_geodesic(p, q):
    """A unit-speed geodesic from p through q (at arclength d(p, q))."""
    res = cc_distance(p, q)
    return Geodesic(Point.of(p), res.alpha, res.phi), res.distance
