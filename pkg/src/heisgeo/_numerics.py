"""Cancellation-free trigonometric quotients and a vectorised safeguarded Newton solver."""

import math

import numpy as np

_SMALL = 1e-4


def sinc(x):
    """sin(x)/x, equal to 1 at 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SMALL
    xs = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(xs) / xs)


def versinc(x):
    """(1 - cos x)/x, written as 2 sin^2(x/2)/x so no cancellation occurs."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SMALL
    xs = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, x / 2.0 - x * x2 / 24.0 + x * x2 * x2 / 720.0,
                    2.0 * np.sin(xs / 2.0) ** 2 / xs)


# (x - sin x)/x^2 = sum_{k>=1} (-1)^(k+1) x^(2k-1) / (2k+1)!
_XSIN_COEFFS = [(-1) ** (k + 1) / math.factorial(2 * k + 1) for k in range(1, 12)]


def xsin(x):
    """(x - sin x)/x^2, odd, ~x/6 near 0.

    The direct quotient loses about log10(1/x^2) digits, so the power series is
    used for |x| < 1 (truncation below 1e-22 there).
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1.0
    xs = np.where(small, 1.0, x)
    x2 = x * x
    acc = np.zeros_like(x)
    for c in reversed(_XSIN_COEFFS):
        acc = acc * x2 + c
    return np.where(small, x * acc, (xs - np.sin(xs)) / (xs * xs))


def newton_bisect(fun, dfun, target, lo, hi, x0, tol=1e-13, maxiter=200):
    """Solve fun(x) = target for increasing ``fun`` on the open bracket (lo, hi).

    Arrays are handled elementwise. Newton steps that leave the current bracket
    are replaced by bisection, so convergence is guaranteed; once the Newton
    correction drops under ``tol`` the iterate is accepted. With ``dfun=None``,
    ``fun`` returns the pair (value, derivative).
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    x = np.broadcast_to(np.asarray(x0, dtype=float), target.shape).copy()
    x = np.clip(x, lo, hi)
    done = np.zeros(target.shape, dtype=bool)
    for _ in range(maxiter):
        if dfun is None:
            fx, dfx = fun(x)
        else:
            fx, dfx = fun(x), dfun(x)
        r = fx - target
        lo = np.where(r < 0, x, lo)
        hi = np.where(r > 0, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - r / dfx
        # a converged step may land exactly on a bracket end, which is fine
        bad = ~np.isfinite(xn) | (xn < lo) | (xn > hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        conv = (~bad & (np.abs(xn - x) <= tol * np.maximum(1.0, np.abs(x)))) | (r == 0)
        x = np.where(done | (r == 0), x, xn)
        done = done | conv
        if done.all():
            break
    return x
