"""Oriented surfaces S = {g = 0} = boundary of Omega = {g < 0}, their horizontal
frame, the metric normal and the exponential map.

Graph surfaces t = f(x, y) use g = t - f, so Omega lies below the graph.
Every surface also carries a 2-parameter chart used by the brute-force
distance oracle, and a JSON description (see ``surface_from_json``).
"""

import json
import math
from dataclasses import dataclass

import jsonschema
import numpy as np
from numpy.polynomial import polynomial as P

from . import group
from ._numerics import newton_bisect, sinc, versinc, xsin
from .errors import CharacteristicPointError, InvalidArgument, VerticalTangentError
from .geodesic import Geodesic, cc_distances
from .group import HVec, Point

CHAR_TOL = 1e-8
ON_SURFACE_TOL = 1e-9


@dataclass(frozen=True)
class ChartWindow:
    """Rectangle [a0, a1] x [b0, b1] in chart coordinates.

    A periodic coordinate is an angle: hitting its edge does not make a
    minimiser untrustworthy.
    """

    a0: float
    a1: float
    b0: float
    b1: float
    periodic_a: bool = False
    periodic_b: bool = False


class Surface:
    """Base class. Subclasses provide g and its first two derivatives, vectorised
    over points stored on the last axis."""

    name = "surface"
    fd_fallback = False

    def g(self, p):
        raise NotImplementedError

    def dg(self, p):
        """(g_x, g_y, g_t) on the last axis."""
        raise NotImplementedError

    def d2g(self, p):
        """Euclidean Hessian of g, shape (..., 3, 3)."""
        raise NotImplementedError

    def level(self, p):
        """A continuous function defined everywhere, zero exactly on S and negative in Omega."""
        return self.g(p)

    def side(self, p):
        """-1 inside Omega, +1 outside, 0 on S."""
        return np.sign(self.level(p))

    def scale(self, p):
        return 1.0 + float(np.max(np.abs(np.asarray(p, dtype=float))))

    # chart used by the oracle
    def chart(self, a, b):
        raise NotImplementedError

    def chart_window(self, p, radius):
        """A chart rectangle containing every point of S within CC distance ``radius`` of p."""
        raise NotImplementedError

    def seed(self, p):
        """Some point of S near p; d(p, seed) bounds the distance to S from above."""
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def contains(self, p, tol=ON_SURFACE_TOL):
        return abs(float(self.g(p))) <= tol * self.scale(p)

    def check_derivatives(self, p, h=1e-5):
        """Largest mismatch between the supplied derivatives and central differences of g."""
        p = np.asarray(p, dtype=float)
        e = np.eye(3) * h
        fd1 = np.array([(self.g(p + e[i]) - self.g(p - e[i])) / (2 * h) for i in range(3)])
        d1 = np.asarray(self.dg(p))
        fd2 = np.array([(np.asarray(self.dg(p + e[i])) - np.asarray(self.dg(p - e[i]))) / (2 * h)
                        for i in range(3)])
        d2 = np.asarray(self.d2g(p))
        return max(np.max(np.abs(fd1 - d1)), np.max(np.abs(fd2 - d2)))


class GraphSurface(Surface):
    """t = f(x, y), Omega below the graph. Subclasses supply f, (f_x, f_y) and
    (f_xx, f_xy, f_yy)."""

    def f(self, x, y):
        raise NotImplementedError

    def f1(self, x, y):
        raise NotImplementedError

    def f2(self, x, y):
        raise NotImplementedError

    def g(self, p):
        p = np.asarray(p, dtype=float)
        return p[..., 2] - self.f(p[..., 0], p[..., 1])

    def dg(self, p):
        p = np.asarray(p, dtype=float)
        fx, fy = self.f1(p[..., 0], p[..., 1])
        return np.stack([-fx, -fy, np.ones_like(fx)], axis=-1)

    def d2g(self, p):
        p = np.asarray(p, dtype=float)
        fxx, fxy, fyy = self.f2(p[..., 0], p[..., 1])
        z = np.zeros_like(fxx)
        return -np.stack([np.stack([fxx, fxy, z], -1), np.stack([fxy, fyy, z], -1),
                          np.stack([z, z, z], -1)], -2)

    def point(self, x, y):
        return group._out(self.chart(x, y))

    def chart(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        return np.stack([a, b, self.f(a, b)], axis=-1)

    def chart_window(self, p, radius):
        # horizontal displacement never exceeds the CC distance
        x, y = float(p[0]), float(p[1])
        r = 1.05 * radius + 1e-12
        return ChartWindow(x - r, x + r, y - r, y + r)

    def seed(self, p):
        return Point.of(self.chart(p[0], p[1]))


class Plane(GraphSurface):
    """The horizontal plane t = c; characteristic at (0, 0, c)."""

    name = "plane"

    def __init__(self, c=0.0):
        self.c = float(c)

    def f(self, x, y):
        return np.zeros_like(np.asarray(x, dtype=float) + y) + self.c

    def f1(self, x, y):
        z = np.zeros_like(np.asarray(x, dtype=float) + y)
        return z, z.copy()

    def f2(self, x, y):
        z = np.zeros_like(np.asarray(x, dtype=float) + y)
        return z, z.copy(), z.copy()

    def to_json(self):
        return {"type": "plane", "c": self.c}


class Paraboloid(GraphSurface):
    """t = a (x^2 + y^2); characteristic only at the origin."""

    name = "paraboloid"

    def __init__(self, a=1.0):
        self.a = float(a)

    def f(self, x, y):
        return self.a * (np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2)

    def f1(self, x, y):
        return 2 * self.a * np.asarray(x, dtype=float), 2 * self.a * np.asarray(y, dtype=float)

    def f2(self, x, y):
        one = np.ones_like(np.asarray(x, dtype=float) + y)
        return 2 * self.a * one, 0 * one, 2 * self.a * one

    def to_json(self):
        return {"type": "paraboloid", "a": self.a}


class GraphPoly(GraphSurface):
    """t = sum c_ij x^i y^j, from a list of [i, j, c] terms."""

    name = "graph-poly"

    def __init__(self, terms):
        self.terms = [(int(i), int(j), float(c)) for i, j, c in terms]
        if any(i < 0 or j < 0 for i, j, _ in self.terms):
            raise InvalidArgument("polynomial exponents must be nonnegative")
        n = 1 + max([0] + [max(i, j) for i, j, _ in self.terms])
        self.coef = np.zeros((n, n))
        for i, j, c in self.terms:
            self.coef[i, j] += c
        self._cx = P.polyder(self.coef, axis=0)
        self._cy = P.polyder(self.coef, axis=1)
        self._cxx = P.polyder(self._cx, axis=0)
        self._cxy = P.polyder(self._cx, axis=1)
        self._cyy = P.polyder(self._cy, axis=1)

    @staticmethod
    def _ev(x, y, c):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return P.polyval2d(x, y, c) if c.size else np.zeros_like(x)

    def f(self, x, y):
        return self._ev(x, y, self.coef)

    def f1(self, x, y):
        return self._ev(x, y, self._cx), self._ev(x, y, self._cy)

    def f2(self, x, y):
        return self._ev(x, y, self._cxx), self._ev(x, y, self._cxy), self._ev(x, y, self._cyy)

    def to_json(self):
        return {"type": "graph-poly", "coeffs": [list(t) for t in self.terms]}


class Cylinder(Surface):
    """Vertical cylinder x^2 + y^2 = r^2 bounding the solid cylinder, g = x^2 + y^2 - r^2.

    Chart: (angle, t)."""

    name = "cylinder"

    def __init__(self, r=1.0):
        if not r > 0:
            raise InvalidArgument("cylinder radius must be positive")
        self.r = float(r)

    def g(self, p):
        p = np.asarray(p, dtype=float)
        return p[..., 0] ** 2 + p[..., 1] ** 2 - self.r ** 2

    def dg(self, p):
        p = np.asarray(p, dtype=float)
        return np.stack([2 * p[..., 0], 2 * p[..., 1], np.zeros_like(p[..., 0])], -1)

    def d2g(self, p):
        p = np.asarray(p, dtype=float)
        h = np.zeros(p.shape[:-1] + (3, 3))
        h[..., 0, 0] = h[..., 1, 1] = 2.0
        return h

    def scale(self, p):
        return max(Surface.scale(self, p), self.r)

    def chart(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        return np.stack([self.r * np.cos(a), self.r * np.sin(a), b], -1)

    def chart_window(self, p, radius):
        x, y, t = (float(c) for c in p)
        ang = math.atan2(y, x)
        rho = math.hypot(x, y)
        # a ball of radius R only reaches heights R^2/pi, plus the twist 2|z_p||z_q - z_p|
        dt = 1.05 * (radius ** 2 / math.pi + 2 * rho * radius) + 1e-12
        return ChartWindow(ang - math.pi, ang + math.pi, t - dt, t + dt, periodic_a=True)

    def seed(self, p):
        x, y, t = (float(c) for c in p)
        ang = math.atan2(y, x) if (x or y) else 0.0
        return Point(self.r * math.cos(ang), self.r * math.sin(ang), t)

    def to_json(self):
        return {"type": "cylinder", "r": self.r}


def _sphere_v(r):
    """v in (0, pi) with sin(v)/v = r, for r in (0, 1)."""
    r = np.asarray(r, dtype=float)

    def neg_sinc(v):
        return -sinc(v)

    def d_neg_sinc(v):
        return -(v * np.cos(v) - np.sin(v)) / (v * v)

    guess = np.where(r > 0.5, np.sqrt(np.maximum(6 * (1 - r), 0.0)), math.pi * (1 - r))
    return newton_bisect(neg_sinc, d_neg_sinc, -r, 0.0, math.pi, guess, tol=1e-15)


def sphere_chart_point(u, ang):
    """Unit CC sphere point z = e^{i ang} 2 sin(u/2)/u, t = 2(u - sin u)/u^2, |u| < 2 pi."""
    u, ang = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(ang, dtype=float))
    rho = sinc(u / 2.0)
    return np.stack([rho * np.cos(ang), rho * np.sin(ang), 2.0 * xsin(u)], -1)


class CCSphere(GraphSurface):
    """The unit CC sphere {d(O, .) = 1}, Omega the open unit ball.

    Locally g = |t| - f(|z|) where t = f(|z|) is the upper half; with
    |z| = sin(v)/v the profile gives f = (2v - sin 2v)/(2 v^2),
    f_r = -2 cos(v)/v and f_rr = 2 (v sin v + cos v)/(v cos v - sin v).
    The equator t = 0 (vertical tangent) and the poles (characteristic) are
    excluded from derivative evaluation.
    """

    name = "cc-sphere"

    def _radial(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        rho = np.hypot(x, y)
        if np.any(rho >= 1) or np.any(rho <= 0):
            raise InvalidArgument("CC sphere graph is defined for 0 < |z| < 1")
        v = _sphere_v(rho)
        return x, y, rho, v

    def f(self, x, y):
        _, _, _, v = self._radial(x, y)
        return 2.0 * xsin(2 * v)

    def f1(self, x, y):
        x, y, rho, v = self._radial(x, y)
        fr = -2.0 * np.cos(v) / v
        return fr * x / rho, fr * y / rho

    def f2(self, x, y):
        x, y, rho, v = self._radial(x, y)
        fr = -2.0 * np.cos(v) / v
        frr = 2.0 * (v * np.sin(v) + np.cos(v)) / (v * np.cos(v) - np.sin(v))
        c, s = x / rho, y / rho
        return (frr * c * c + fr * s * s / rho, (frr - fr / rho) * s * c,
                frr * s * s + fr * c * c / rho)

    def _sgn(self, p):
        t = np.asarray(p, dtype=float)[..., 2]
        return np.where(t >= 0, 1.0, -1.0)

    def g(self, p):
        p = np.asarray(p, dtype=float)
        return np.abs(p[..., 2]) - self.f(p[..., 0], p[..., 1])

    def dg(self, p):
        d = GraphSurface.dg(self, p)
        d[..., 2] *= self._sgn(p)
        return d

    def level(self, p):
        # the graph form only covers 0 < |z| < 1
        return cc_distances(np.zeros(3), np.asarray(p, dtype=float)) - 1.0

    def chart(self, a, b):
        return sphere_chart_point(a, b)

    def chart_window(self, p, radius):
        x, y, _ = (float(c) for c in p)
        ang = math.atan2(y, x)
        eps = 1e-9
        return ChartWindow(-2 * math.pi + eps, 2 * math.pi - eps, ang - math.pi, ang + math.pi,
                           periodic_b=True)

    def seed(self, p):
        x, y, t = (float(c) for c in p)
        # closest profile point in a coarse scan of the meridian through p
        ang = math.atan2(y, x)
        u = np.linspace(-2 * math.pi + 1e-6, 2 * math.pi - 1e-6, 257)
        pts = sphere_chart_point(u, ang)
        d = cc_distances(np.array([x, y, t]), pts)
        return Point.of(pts[int(np.argmin(d))])

    def to_json(self):
        return {"type": "cc-sphere"}


class ImplicitSurface(Surface):
    """g supplied as a callable; missing derivatives fall back to central
    differences (flagged via ``fd_fallback``), which are noticeably less
    accurate than analytic ones."""

    name = "implicit"

    def __init__(self, g, dg=None, d2g=None, chart=None, window=None, seed=None, h=None):
        self._g, self._dg, self._d2g = g, dg, d2g
        self._chart, self._window, self._seed = chart, window, seed
        self.fd_fallback = dg is None or d2g is None
        self.h = h if h is not None else np.finfo(float).eps ** (1 / 3)

    def g(self, p):
        return self._g(np.asarray(p, dtype=float))

    def dg(self, p):
        p = np.asarray(p, dtype=float)
        if self._dg is not None:
            return self._dg(p)
        e = np.eye(3) * self.h * self.scale(p)
        return np.stack([(self.g(p + e[i]) - self.g(p - e[i])) / (2 * e[i, i]) for i in range(3)], -1)

    def d2g(self, p):
        p = np.asarray(p, dtype=float)
        if self._d2g is not None:
            return self._d2g(p)
        h = np.finfo(float).eps ** 0.25 * self.scale(p)
        e = np.eye(3) * h
        rows = [(np.asarray(self.dg(p + e[i])) - np.asarray(self.dg(p - e[i]))) / (2 * h) for i in range(3)]
        m = np.stack(rows, -2)
        return 0.5 * (m + np.swapaxes(m, -1, -2))

    def chart(self, a, b):
        if self._chart is None:
            raise InvalidArgument("this implicit surface has no chart")
        return self._chart(a, b)

    def chart_window(self, p, radius):
        if self._window is None:
            raise InvalidArgument("this implicit surface has no chart window")
        return self._window(p, radius)

    def seed(self, p):
        if self._seed is None:
            raise InvalidArgument("this implicit surface has no seed rule")
        return Point.of(self._seed(p))

    def to_json(self):
        raise InvalidArgument("implicit surfaces built from callables are not serialisable")


# ---------------------------------------------------------------------------
# JSON catalog

SURFACE_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "oneOf": [
        {"properties": {"type": {"const": "plane"}, "c": {"type": "number"}},
         "additionalProperties": False},
        {"properties": {"type": {"const": "paraboloid"}, "a": {"type": "number"}},
         "additionalProperties": False},
        {"properties": {"type": {"const": "cylinder"}, "r": {"type": "number", "exclusiveMinimum": 0}},
         "additionalProperties": False},
        {"properties": {"type": {"const": "cc-sphere"}}, "additionalProperties": False},
        {"properties": {"type": {"const": "graph-poly"},
                        "coeffs": {"type": "array", "minItems": 1,
                                   "items": {"type": "array", "minItems": 3, "maxItems": 3,
                                             "prefixItems": [{"type": "integer", "minimum": 0},
                                                             {"type": "integer", "minimum": 0},
                                                             {"type": "number"}]}}},
         "required": ["coeffs"], "additionalProperties": False},
    ],
}


def surface_from_json(doc):
    """Build a catalog surface from a dict (or JSON string) matching SURFACE_SCHEMA."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        jsonschema.validate(doc, SURFACE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidArgument(f"bad surface description: {exc.message}") from None
    kind = doc["type"]
    if kind == "plane":
        return Plane(doc.get("c", 0.0))
    if kind == "paraboloid":
        return Paraboloid(doc.get("a", 1.0))
    if kind == "cylinder":
        return Cylinder(doc.get("r", 1.0))
    if kind == "cc-sphere":
        return CCSphere()
    return GraphPoly(doc["coeffs"])


# ---------------------------------------------------------------------------
# horizontal data of a surface


@dataclass(frozen=True)
class SurfaceFrame:
    point: Point
    Xg: float
    Yg: float
    grad_norm: float
    v: HVec
    n: HVec


def horizontal_gradient_g(s, p):
    """(Xg, Yg) with X = d_x + 2y d_t, Y = d_y - 2x d_t; no membership test, vectorised."""
    p = np.asarray(p, dtype=float)
    d = np.asarray(s.dg(p))
    return d[..., 0] + 2 * p[..., 1] * d[..., 2], d[..., 1] - 2 * p[..., 0] * d[..., 2]


def _require_on(s, p):
    if not s.contains(p):
        raise InvalidArgument(f"point {tuple(p)} is not on the surface (g = {float(s.g(p)):.3e})")


def horizontal_gradient(s, p):
    p = Point.of(p)
    _require_on(s, p)
    xg, yg = horizontal_gradient_g(s, p)
    return float(xg), float(yg)


def char_tol(s, p):
    return CHAR_TOL * s.scale(p)


def frame(s, p):
    """Unit horizontal tangent v = (Yg, -Xg)/|grad_H g| and outward normal n = (Xg, Yg)/|grad_H g|."""
    p = Point.of(p)
    xg, yg = horizontal_gradient(s, p)
    nrm = math.hypot(xg, yg)
    tol = char_tol(s, p)
    if nrm <= tol:
        raise CharacteristicPointError(p, nrm, tol)
    return SurfaceFrame(p, xg, yg, nrm, HVec(p, yg / nrm, -xg / nrm), HVec(p, xg / nrm, yg / nrm))


def char_plane_distance(s, p):
    """CC distance from p to the characteristic point of the tangent plane at p."""
    p = Point.of(p)
    xg, yg = horizontal_gradient(s, p)
    gt = float(np.asarray(s.dg(p))[2])
    if gt == 0:
        raise VerticalTangentError(f"tangent plane at {tuple(p)} is vertical")
    return math.hypot(xg, yg) / (2 * abs(gt))


def normal_curvature_parameter(s, p):
    """4 d_t g / |grad_H g|: the curvature parameter of the metric normal."""
    fr = frame(s, p)
    gt = float(np.asarray(s.dg(fr.point))[2])
    return 4.0 * gt / fr.grad_norm


def metric_normal(s, p, sigma):
    """Oriented metric normal P . eta(sigma); delta_S equals sigma along it for small sigma.

    With w = 4 d_t g sigma / |grad_H g|:
        eta_x = [Yg (1 - cos w) + Xg sin w] / (4 d_t g)
        eta_y = [-Xg (1 - cos w) + Yg sin w] / (4 d_t g)
        eta_t = |grad_H g|^2 (w - sin w) / (8 (d_t g)^2)
    and the d_t g = 0 limit is the straight line sigma (Xg, Yg, 0)/|grad_H g|.
    """
    fr = frame(s, p)
    gt = float(np.asarray(s.dg(fr.point))[2])
    sigma = np.asarray(sigma, dtype=float)
    k = 4.0 * gt / fr.grad_norm
    w = k * sigma
    nx, ny = fr.Xg / fr.grad_norm, fr.Yg / fr.grad_norm
    # divided through by the arclength so that k = 0 needs no special case
    ex = sigma * (ny * versinc(w) + nx * sinc(w))
    ey = sigma * (-nx * versinc(w) + ny * sinc(w))
    et = 2.0 * sigma * sigma * xsin(w)
    eta = np.stack([ex, ey, et], -1)
    return group.group_mul(fr.point, eta)


def metric_normal_geodesic(s, p):
    """The metric normal as a Geodesic: angle of the outward normal, phi = 4 d_t g/|grad_H g|."""
    fr = frame(s, p)
    return Geodesic(fr.point, math.atan2(fr.Yg, fr.Xg), normal_curvature_parameter(s, p))


def normal_lifetime(s, p):
    """pi/|p_S|: how long the metric normal keeps realising the distance to S."""
    k = normal_curvature_parameter(s, p)
    return math.inf if k == 0 else math.pi / abs(k)


def exp_map(s, u, v, sigma):
    """F(u, v, sigma) = metric normal at (u, v, f(u, v)) evaluated at sigma (graph surfaces)."""
    if not isinstance(s, GraphSurface):
        raise InvalidArgument("exp_map needs a graph surface")
    return metric_normal(s, s.point(u, v), sigma)


def exp_map_jacobian_at_zero(s, u, v):
    """Closed form of dF at sigma = 0: columns d/du, d/dv, d/dsigma."""
    p = s.point(u, v)
    fx, fy = (float(c) for c in s.f1(u, v))
    xg, yg = horizontal_gradient(s, p)
    nrm = math.hypot(xg, yg)
    return np.array([[1.0, 0.0, xg / nrm],
                     [0.0, 1.0, yg / nrm],
                     [fx, fy, (2 * v * xg - 2 * u * yg) / nrm]])
