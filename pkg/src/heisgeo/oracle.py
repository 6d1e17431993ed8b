"""Brute-force ground truth: signed distance to a surface by direct minimisation
of the CC distance over a chart, and finite-difference horizontal derivatives.

Nothing here uses the curvature formulas; only the group law, the point-to-point
distance and the surface chart.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._numerics import sinc, versinc, xsin
from .errors import InvalidArgument
from .geodesic import cc_distances
from .group import Point, group_mul
from .surfaces import ChartWindow

# base steps scale with 1 + |p|; the Hessian uses a coarser default because
# second differences amplify the ~1e-13 noise of the oracle by 1/h^2
GRAD_STEP = 1e-4
HESS_STEP = 2e-3


@dataclass(frozen=True)
class FDConfig:
    step: float = GRAD_STEP
    richardson: int = 2

    def __post_init__(self):
        if not (1e-7 <= self.step <= 1e-2):
            raise InvalidArgument(f"finite-difference step {self.step!r} outside [1e-7, 1e-2]")
        if not (isinstance(self.richardson, int) and 0 <= self.richardson <= 4):
            raise InvalidArgument("richardson levels must be an integer in [0, 4]")


@dataclass(frozen=True)
class OracleDistance:
    value: float
    foot: Point
    iterations: int
    params: tuple
    trusted: bool = True


def _scan_min(fun, w, n, zoom, tol, max_iter):
    """Grid scan of ``fun(A, B)`` over window w, then zoom on +-2 cells around the best node."""

    def scan(a_lo, a_hi, b_lo, b_hi, m):
        A, B = np.meshgrid(np.linspace(a_lo, a_hi, m), np.linspace(b_lo, b_hi, m), indexing="ij")
        v = fun(A, B)
        k = np.unravel_index(int(np.argmin(v)), v.shape)
        return A[k], B[k], v[k], (A[1, 0] - A[0, 0]), (B[0, 1] - B[0, 0])

    a, b, v, da, db = scan(w.a0, w.a1, w.b0, w.b1, n)
    it = 0
    while (da > tol[0] or db > tol[1]) and it < max_iter:
        a_lo, a_hi = a - 2 * da, a + 2 * da
        b_lo, b_hi = b - 2 * db, b + 2 * db
        if not w.periodic_a:
            a_lo, a_hi = max(a_lo, w.a0), min(a_hi, w.a1)
        if not w.periodic_b:
            b_lo, b_hi = max(b_lo, w.b0), min(b_hi, w.b1)
        a, b, v, da, db = scan(a_lo, a_hi, b_lo, b_hi, zoom)
        it += 1
    edge = 4 * max(da, db)
    on_edge = ((not w.periodic_a and (a - w.a0 < edge or w.a1 - a < edge))
               or (not w.periodic_b and (b - w.b0 < edge or w.b1 - b < edge)))
    return float(a), float(b), float(v), it, on_edge


def _sphere_points(p, alpha, lam, r):
    """p . gamma_{alpha, lam/r}(r): points of the CC sphere of radius r about p,
    indexed by the initial angle and the total turning lam in [-2 pi, 2 pi]."""
    sa, ca = np.sin(alpha), np.cos(alpha)
    vs, sc = versinc(lam), sinc(lam)
    eta = np.stack([r * (sa * vs + ca * sc), r * (sa * sc - ca * vs),
                    2.0 * r * r * xsin(lam) + 0 * alpha], -1)
    return group_mul(p, eta)


# angular resolution of the contact scan; the minimum value errs by O(tol^2)
CONTACT_TOL = 1e-7
POLISH_MIN_STEP = 1e-5

CONTACT_WINDOW = ChartWindow(0.0, 2 * math.pi, -2 * math.pi, 2 * math.pi, periodic_a=True)


def _polish(fun, a, b, h, tol, max_iter=12):
    """Newton steps on 3x3 central-difference stencils of spacing h around (a, b).

    Returns the best evaluated node, so the value is always attained by fun.
    Stops when the step falls under tol or the local model is not convex. The
    spacing never drops below POLISH_MIN_STEP: the curvature of the contact
    function scales like r^2, and finer second differences are rounding noise.
    """
    off = np.array([-1.0, 0.0, 1.0])
    best = None
    for _ in range(max_iter):
        A, B = np.meshgrid(a + h * off, b + h * off, indexing="ij")
        v = fun(A, B)
        k = np.unravel_index(int(np.argmin(v)), v.shape)
        if best is None or v[k] < best[2]:
            best = (float(A[k]), float(B[k]), float(v[k]))
        ga = (v[2, 1] - v[0, 1]) / (2 * h)
        gb = (v[1, 2] - v[1, 0]) / (2 * h)
        haa = (v[2, 1] - 2 * v[1, 1] + v[0, 1]) / h ** 2
        hbb = (v[1, 2] - 2 * v[1, 1] + v[1, 0]) / h ** 2
        hab = (v[2, 2] - v[2, 0] - v[0, 2] + v[0, 0]) / (4 * h * h)
        det = haa * hbb - hab * hab
        if not (haa > 0 and det > 0):
            break
        da = -(hbb * ga - hab * gb) / det
        db = -(haa * gb - hab * ga) / det
        step = math.hypot(da, db)
        if step > 2 * h:
            # the quadratic model is not trusted that far out; recentre on the best node
            a, b = best[0], best[1]
            continue
        a, b = a + da, b + db
        if step < tol:
            break
        h = max(min(h, 10 * step), POLISH_MIN_STEP)
    vf = float(fun(np.array([a]), np.array([b]))[0])
    if vf < best[2]:
        best = (a, b, vf)
    return best


def _contact(s, p, r, sign, grid=25, zoom=21, levels=2):
    """min of sign * level over the CC sphere of radius r about p; returns (value, alpha, lam).

    A global grid in (alpha, lam) with ``levels`` zoomed scans locates the
    minimiser to a few cells; Newton polishing then refines it to CONTACT_TOL.
    """
    if r <= 0:
        return sign * float(s.level(p)), 0.0, 0.0

    def fun(A, L):
        return sign * s.level(_sphere_points(p, A, L, r))

    w = CONTACT_WINDOW
    coarse = (w.a1 - w.a0) / (grid - 1) * (4.0 / (zoom - 1)) ** levels
    a, lam, v, _, _ = _scan_min(fun, w, grid, zoom, (coarse, coarse), levels)
    a2, lam2, v2 = _polish(fun, a, lam, coarse, CONTACT_TOL)
    if v2 < v:
        a, lam, v = a2, lam2, v2
    return v, a, lam


def oracle_signed_distance(s, p, window=None, grid=64, zoom=17, tol=1e-4, max_iter=60,
                           foot_hint=None):
    """Signed distance from p to s: negative inside Omega.

    Stage 1 scans the surface chart (``grid`` x ``grid`` over ``window``, then
    zoomed ``zoom`` x ``zoom`` scans), minimising d(p, q). This gives an upper
    bound U and a candidate foot. Near S the chart minimiser sits in a valley
    of width ~d^2, so stage 2 finds the distance itself as the first radius r
    at which the CC sphere of radius r about p touches S:
    F(r) = min over that sphere of (side * level) changes sign at r = d_S.

    ``foot_hint``, a known point of S, replaces stage 1: its distance is
    already an upper bound.
    """
    p = np.asarray(p, dtype=float)
    sign = float(s.side(p))
    if sign == 0.0:
        return OracleDistance(0.0, Point.of(p), 0, (), True)
    if foot_hint is not None:
        a = b = math.nan
        it, on_edge = 0, False
        upper = float(cc_distances(p, np.asarray(foot_hint, dtype=float)))
    else:
        if window is None:
            bound = float(cc_distances(p, np.asarray(s.seed(p))))
            window = s.chart_window(p, bound)
        w = window
        if not (w.a1 > w.a0 and w.b1 > w.b0):
            raise InvalidArgument("empty chart window")

        def dist(A, B):
            return cc_distances(p, s.chart(A, B))

        size = (w.a1 - w.a0, w.b1 - w.b0)
        a, b, upper, it, on_edge = _scan_min(dist, w, grid, zoom, (tol * size[0], tol * size[1]),
                                             max_iter)

    seen = {}

    def F(r):
        seen[r] = _contact(s, p, r, sign)
        return seen[r][0]

    lo, hi = 0.0, upper
    f_hi = F(hi)
    if f_hi > 0:
        # the bounding point lies on S at distance `upper`; only rounding keeps F positive
        foot = foot_hint if foot_hint is not None else s.chart(a, b)
        return OracleDistance(sign * upper, Point.of(foot), it, (a, b), not on_edge)
    r = brentq(F, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    _, alpha, lam = seen[r] if r in seen else _contact(s, p, r, sign)
    foot = Point.of(_sphere_points(p, alpha, lam, r))
    return OracleDistance(sign * r, foot, it, (a, b), not on_edge)


class SignedDistanceField:
    """delta_S as a callable. The foot of a reference point bounds the distance
    of every nearby query, so stencil evaluations skip the chart scan."""

    def __init__(self, s, center, **kw):
        self.s = s
        self.kw = kw
        self.ref = oracle_signed_distance(s, center, **kw)
        self.untrusted = 0 if self.ref.trusted else 1

    def __call__(self, q):
        r = oracle_signed_distance(self.s, q, foot_hint=self.ref.foot, **self.kw)
        if not r.trusted:
            self.untrusted += 1
        return r.value


def _flow_dir(q, i):
    # X = (1, 0, 2y), Y = (0, 1, -2x); their integral curves are straight lines
    q = np.asarray(q, dtype=float)
    return np.array([1.0, 0.0, 2 * q[1]]) if i == 0 else np.array([0.0, 1.0, -2 * q[0]])


def _richardson(vals, order=2):
    """Combine estimates at steps h, h/2, h/4, ... whose error is even in h."""
    vals = [np.asarray(v, dtype=float) for v in vals]
    k = order
    while len(vals) > 1:
        f = 2.0 ** k
        vals = [(f * vals[j + 1] - vals[j]) / (f - 1) for j in range(len(vals) - 1)]
        k += 2
    return vals[0]


def _steps(p, cfg):
    h = cfg.step * (1.0 + float(np.max(np.abs(p))))
    return [h / 2 ** j for j in range(cfg.richardson + 1)]


def fd_horizontal_gradient(field, p, cfg=None):
    """(X field, Y field) at p by Richardson-extrapolated central differences."""
    cfg = cfg or FDConfig()
    p = np.asarray(p, dtype=float)
    out = []
    for i in range(2):
        e = _flow_dir(p, i)
        est = [(field(p + h * e) - field(p - h * e)) / (2 * h) for h in _steps(p, cfg)]
        out.append(float(_richardson(est)))
    return out[0], out[1]


def fd_horizontal_hessian(field, p, cfg=None):
    """[[XX, YX], [XY, YY]] with entry (i, j) = e_j(e_i field), e_0 = X, e_1 = Y."""
    cfg = cfg or FDConfig(step=HESS_STEP, richardson=1)
    p = np.asarray(p, dtype=float)
    f0 = field(p)
    levels = []
    for h in _steps(p, cfg):
        m = np.zeros((2, 2))
        for i in range(2):
            e = _flow_dir(p, i)
            m[i, i] = (field(p + h * e) - 2 * f0 + field(p - h * e)) / (h * h)
        for i, j in ((0, 1), (1, 0)):
            # e_i field at the two ends of the e_j chord, then differenced along e_j
            ej = _flow_dir(p, j)
            ends = []
            for sgn in (1.0, -1.0):
                q = p + sgn * h * ej
                ei = _flow_dir(q, i)
                ends.append((field(q + h * ei) - field(q - h * ei)) / (2 * h))
            m[i, j] = (ends[0] - ends[1]) / (2 * h)
        levels.append(m)
    return _richardson(levels)


def eikonal_residual(s, p, cfg=None, **kw):
    field = SignedDistanceField(s, p, **kw)
    gx, gy = fd_horizontal_gradient(field, p, cfg)
    return abs(math.hypot(gx, gy) - 1.0)


def oracle_hessian(s, p, cfg=None, **kw):
    return fd_horizontal_hessian(SignedDistanceField(s, p, **kw), p, cfg)


def oracle_gradient(s, p, cfg=None, **kw):
    return fd_horizontal_gradient(SignedDistanceField(s, p, **kw), p, cfg)
