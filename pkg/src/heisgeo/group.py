"""The first Heisenberg group H = R^3 with product

    (x, y, t) . (x', y', t') = (x + x', y + y', t + t' + 2 (x' y - x y')).

Functions accept a single point (``Point`` or any length-3 sequence) or an
array of points with coordinates on the last axis. Single points come back as
``Point``; batches come back as ``ndarray``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument

# identity and symplectic matrices of the horizontal plane
I2 = np.eye(2)
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class Point(NamedTuple):
    x: float
    y: float
    t: float

    @classmethod
    def of(cls, p):
        x, y, t = (float(c) for c in p)
        return cls(x, y, t)


ORIGIN = Point(0.0, 0.0, 0.0)


def _arr(p):
    return np.asarray(p, dtype=float)


def _out(a):
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return Point(float(a[0]), float(a[1]), float(a[2]))
    return a


def group_mul(p, q):
    """Heisenberg product p . q (not commutative)."""
    p, q = _arr(p), _arr(q)
    x, y, t = p[..., 0], p[..., 1], p[..., 2]
    xq, yq, tq = q[..., 0], q[..., 1], q[..., 2]
    return _out(np.stack([x + xq, y + yq, t + tq + 2.0 * (xq * y - x * yq)], axis=-1))


def inverse(p):
    return _out(-_arr(p))


def dilate(lam, p):
    """delta_lam(z, t) = (lam z, lam^2 t)."""
    if lam == 0:
        raise InvalidArgument("dilation factor must be nonzero")
    p = _arr(p)
    return _out(np.stack([lam * p[..., 0], lam * p[..., 1], lam * lam * p[..., 2]], axis=-1))


def rotate(theta, p):
    """Rotation by theta about the t-axis; an isometry of the CC distance."""
    p = _arr(p)
    c, s = np.cos(theta), np.sin(theta)
    x, y = p[..., 0], p[..., 1]
    return _out(np.stack([c * x - s * y, s * x + c * y, p[..., 2]], axis=-1))


def rot2(theta):
    """The 2x2 rotation matrix; the action of rotate() on the horizontal frame."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def dL(q):
    """Differential of left translation by q = (a, b, c); independent of the base point."""
    a, b, _ = _arr(q)
    return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [2.0 * b, -2.0 * a, 1.0]])


def horizontal_ambient(p, a, b):
    """Ambient R^3 vector of a X_p + b Y_p."""
    p = _arr(p)
    return np.stack([np.broadcast_to(a, p[..., 0].shape),
                     np.broadcast_to(b, p[..., 0].shape),
                     2.0 * p[..., 1] * a - 2.0 * p[..., 0] * b], axis=-1)


def horizontal_components(p, w, tol=None):
    """Inverse of horizontal_ambient. Raises if w is not horizontal at p (given tol)."""
    p, w = _arr(p), _arr(w)
    a, b = w[..., 0], w[..., 1]
    if tol is not None:
        resid = np.abs(w[..., 2] - (2.0 * p[..., 1] * a - 2.0 * p[..., 0] * b))
        if np.any(resid > tol):
            raise InvalidArgument(f"vector is not horizontal (residual {np.max(resid):.2e})")
    return a, b


@dataclass(frozen=True)
class HVec:
    """A horizontal vector a X + b Y attached to ``base``."""

    base: Point
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "base", Point.of(self.base))

    @property
    def components(self):
        return np.array([self.a, self.b])

    def ambient(self):
        return horizontal_ambient(self.base, self.a, self.b)

    def norm(self):
        return float(np.hypot(self.a, self.b))

    def _check(self, other):
        if self.base != other.base:
            raise InvalidArgument(f"horizontal vectors live in different fibers: "
                                  f"{tuple(self.base)} vs {tuple(other.base)}")

    def dot(self, other):
        self._check(other)
        return self.a * other.a + self.b * other.b

    def __add__(self, other):
        self._check(other)
        return HVec(self.base, self.a + other.a, self.b + other.b)

    def __mul__(self, c):
        return HVec(self.base, c * self.a, c * self.b)

    __rmul__ = __mul__


def frame_at(p):
    """(X_p, Y_p); ambient forms (1, 0, 2y) and (0, 1, -2x)."""
    p = Point.of(p)
    return HVec(p, 1.0, 0.0), HVec(p, 0.0, 1.0)


def push_left(q, v):
    """Push the horizontal vector v forward by left translation with q."""
    base = group_mul(q, v.base)
    a, b = horizontal_components(base, dL(q) @ v.ambient(), tol=1e-9 * (1 + np.abs(_arr(base)).max()))
    return HVec(base, float(a), float(b))
