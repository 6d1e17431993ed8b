"""Closed-form second-order horizontal geometry of a surface S = {g = 0}:
Q, the mean curvature h, the imaginary curvature p, the horizontal Hessian of
the signed distance on S, its symmetrisation and spectrum, the Weingarten
multiplier and the horizontal curves whose projections carry curvature h.

Hessian layout is [[XX d, YX d], [XY d, YY d]] where YX d = Y(X d).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CharacteristicPointError, InvalidArgument
from .group import HVec, Point
from .surfaces import char_tol, frame, horizontal_gradient_g

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class SecondOrder:
    """X, Y derivatives of g up to order two at a point (not necessarily on S)."""

    Xg: float
    Yg: float
    gt: float
    XXg: float
    XYg: float  # X(Yg)
    YXg: float  # Y(Xg)
    YYg: float

    @property
    def grad_norm(self):
        return math.hypot(self.Xg, self.Yg)

    @property
    def sym_mixed(self):
        return 0.5 * (self.XYg + self.YXg)


def second_order(s, p):
    p = np.asarray(p, dtype=float)
    x, y = p[0], p[1]
    gx, gy, gt = (float(c) for c in np.asarray(s.dg(p)))
    H = np.asarray(s.d2g(p), dtype=float)
    gxx, gxy, gxt = H[0, 0], H[0, 1], H[0, 2]
    gyy, gyt, gtt = H[1, 1], H[1, 2], H[2, 2]
    return SecondOrder(
        Xg=gx + 2 * y * gt,
        Yg=gy - 2 * x * gt,
        gt=gt,
        XXg=gxx + 4 * y * gxt + 4 * y * y * gtt,
        XYg=gxy - 2 * gt - 2 * x * gxt + 2 * y * gyt - 4 * x * y * gtt,
        YXg=gxy + 2 * gt + 2 * y * gyt - 2 * x * gxt - 4 * x * y * gtt,
        YYg=gyy - 4 * x * gyt + 4 * x * x * gtt,
    )


def _checked(s, p):
    fr = frame(s, p)  # membership and characteristic checks
    return fr, second_order(s, fr.point)


def q_form(s, p):
    """Q = XXg (Yg)^2 - 2 (XY)*g Xg Yg + YYg (Xg)^2."""
    d = second_order(s, Point.of(frame(s, p).point))
    return d.XXg * d.Yg ** 2 - 2 * d.sym_mixed * d.Xg * d.Yg + d.YYg * d.Xg ** 2


def mean_curvature(s, p):
    """h = Q / |grad_H g|^3."""
    fr, d = _checked(s, p)
    q = d.XXg * d.Yg ** 2 - 2 * d.sym_mixed * d.Xg * d.Yg + d.YYg * d.Xg ** 2
    return q / fr.grad_norm ** 3


def _weingarten_matrix(d):
    """[[X(Xg/N), Y(Xg/N)], [X(Yg/N), Y(Yg/N)]] with N = |grad_H g|."""
    n = d.grad_norm
    XN = (d.Xg * d.XXg + d.Yg * d.XYg) / n
    YN = (d.Xg * d.YXg + d.Yg * d.YYg) / n
    return np.array([
        [d.XXg / n - d.Xg * XN / n ** 2, d.YXg / n - d.Xg * YN / n ** 2],
        [d.XYg / n - d.Yg * XN / n ** 2, d.YYg / n - d.Yg * YN / n ** 2],
    ])


def divergence_mean_curvature(s, p):
    """h = X(Xg/|grad_H g|) + Y(Yg/|grad_H g|), expanded by the product rule."""
    _, d = _checked(s, p)
    return float(np.trace(_weingarten_matrix(d)))


@dataclass(frozen=True)
class WeingartenResult:
    k: float
    image: np.ndarray
    normal_component: float


def weingarten_map(s, p):
    """Apply the derivative of the unit normal to the tangent direction (-Yg, Xg)."""
    fr, d = _checked(s, p)
    w = np.array([-d.Yg, d.Xg])
    img = _weingarten_matrix(d) @ w
    n = np.array([fr.n.a, fr.n.b])
    return WeingartenResult(float(img @ w / (w @ w)), img, float(img @ n) / math.hypot(*w))


def weingarten(s, p):
    return weingarten_map(s, p).k


def imaginary_curvature(s, p):
    """p = -[X, Y]g / |grad_H g| = 4 d_t g / |grad_H g|."""
    fr, d = _checked(s, p)
    return 4.0 * d.gt / fr.grad_norm


def explicit_hessian(d, q):
    """Entrywise formula in Xg, Yg, Q and d_t g."""
    n = d.grad_norm
    X, Y, c = d.Xg, d.Yg, 4.0 * d.gt
    n3, n5 = n ** 3, n ** 5
    return np.array([
        [Y * Y * q / n5 + c * X * Y / n3, -Y * (X * q / n5 - c * Y / n3)],
        [-X * (Y * q / n5 + c * X / n3), X * X * q / n5 - c * X * Y / n3],
    ])


def factored_hessian(v, h, p):
    """(v (x) v)(h I + p J)."""
    v = np.asarray(v, dtype=float)
    return np.outer(v, v) @ (h * np.eye(2) + p * J2)


def factored_hessian_exact(v, h, p):
    """The same product in exact rational arithmetic on the float inputs."""
    a, b = Fraction(float(v[0])), Fraction(float(v[1]))
    h, p = Fraction(float(h)), Fraction(float(p))
    m = [[a * a, a * b], [a * b, b * b]]
    k = [[h, p], [-p, h]]
    return [[sum(m[i][l] * k[l][j] for l in range(2)) for j in range(2)] for i in range(2)]


def exact_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


@dataclass(frozen=True)
class CurvatureReport:
    point: Point
    h: float
    p: float
    Q: float
    v: HVec
    n: HVec
    hess: np.ndarray
    hess_factored: np.ndarray
    hess_sym: np.ndarray
    eigen: tuple
    det_factored: float

    @property
    def trace(self):
        return float(np.trace(self.hess))

    @property
    def char_poly(self):
        """(1, c1, c0) of det(lambda I - hess_sym)."""
        m = self.hess_sym
        return 1.0, -float(np.trace(m)), float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def to_dict(self):
        return {
            "point": list(self.point),
            "h": self.h,
            "p": self.p,
            "Q": self.Q,
            "v": [self.v.a, self.v.b],
            "n": [self.n.a, self.n.b],
            "hess": self.hess.tolist(),
            "hess_factored": self.hess_factored.tolist(),
            "hess_sym": self.hess_sym.tolist(),
            "eigen": list(self.eigen),
            "det_factored": self.det_factored,
        }


def build_report(point, Q, h, p, v, n, hess=None):
    vv = (v.a, v.b)
    fac = factored_hessian(vv, h, p)
    hess = fac if hess is None else hess
    sym = 0.5 * (hess + hess.T)
    eig = tuple(float(e) for e in np.linalg.eigvalsh(sym))
    det = float(exact_det(factored_hessian_exact(vv, h, p)))
    return CurvatureReport(Point.of(point), float(h), float(p), float(Q), v, n, hess, fac, sym, eig, det)


def hessian(s, p):
    """CurvatureReport at a non-characteristic point of s."""
    fr, d = _checked(s, p)
    q = d.XXg * d.Yg ** 2 - 2 * d.sym_mixed * d.Xg * d.Yg + d.YYg * d.Xg ** 2
    h = q / fr.grad_norm ** 3
    pp = 4.0 * d.gt / fr.grad_norm
    return build_report(fr.point, q, h, pp, fr.v, fr.n, explicit_hessian(d, q))


# ---------------------------------------------------------------------------
# horizontal curves in S


@dataclass(frozen=True)
class HorizontalCurve:
    tau: np.ndarray
    points: np.ndarray
    truncated: bool = False
    diagnostic: str = ""


def _leaf_rhs(s, q):
    """Ambient velocity of Yg X - Xg Y at q."""
    xg, yg = (float(c) for c in horizontal_gradient_g(s, q))
    return np.array([yg, -xg, 2 * q[1] * yg + 2 * q[0] * xg])


def horizontal_curve(s, p, arc=(-1.0, 1.0), step=1e-3):
    """RK4 solution of dGamma/dtau = Yg(Gamma) X - Xg(Gamma) Y, Gamma(0) = p, sampled
    on tau in [arc[0], arc[1]] with a fixed step. Integration stops (truncated)
    when |grad_H g| falls below the characteristic tolerance."""
    p0 = np.asarray(Point.of(frame(s, p).point), dtype=float)
    t0, t1 = float(arc[0]), float(arc[1])
    if not t0 <= 0.0 <= t1:
        raise InvalidArgument("arc must contain 0")

    def run(direction, length):
        n = int(round(length / step))
        pts, q = [], p0.copy()
        hh = direction * step
        for _ in range(n):
            try:
                k1 = _leaf_rhs(s, q)
                k2 = _leaf_rhs(s, q + 0.5 * hh * k1)
                k3 = _leaf_rhs(s, q + 0.5 * hh * k2)
                k4 = _leaf_rhs(s, q + hh * k3)
            except ValueError as exc:
                return pts, f"stopped: {exc}"
            q = q + hh / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            xg, yg = horizontal_gradient_g(s, q)
            if math.hypot(float(xg), float(yg)) <= char_tol(s, q):
                return pts, f"reached a characteristic point near {tuple(q)}"
            pts.append(q)
        return pts, ""

    fwd, m1 = run(1.0, t1)
    bwd, m2 = run(-1.0, -t0)
    pts = np.array(bwd[::-1] + [p0] + fwd)
    tau = step * np.arange(-len(bwd), len(fwd) + 1)
    msg = "; ".join(m for m in (m2, m1) if m)
    return HorizontalCurve(tau, pts, bool(msg), msg)


# five-point central stencils
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def _stencil_curvature(s, p, step):
    c = horizontal_curve(s, p, (-2 * step, 2 * step), step)
    if c.truncated or len(c.points) != 5:
        raise CharacteristicPointError(Point.of(p), 0.0, char_tol(s, p))
    xy = c.points[:, :2]
    d1 = _D1 @ xy / step
    d2 = _D2 @ xy / step ** 2
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return float(-cross / np.hypot(*d1) ** 3)


def default_step(s, p):
    """min(1e-3, 0.01/|h|): the curve turns by at most 0.01 rad per step."""
    h = abs(mean_curvature(s, p))
    return 1e-3 if h == 0 else min(1e-3, 0.01 / h)


def projected_curvature(s, p, step=None):
    """Signed curvature of the projection of the horizontal curve through p,
    from five RK4 samples at spacing step (default ``default_step``) and
    step/2, Richardson-combined to
    cancel the O(step^4) stencil error. Sign convention: -(x'y'' - y'x'')/|.|^3,
    so that the clockwise parametrisation of Yg X - Xg Y counts positive when
    the surface bends around Omega (a cylinder has +1/r)."""
    step = default_step(s, p) if step is None else step
    k1 = _stencil_curvature(s, p, step)
    k2 = _stencil_curvature(s, p, step / 2)
    return (16 * k2 - k1) / 15
