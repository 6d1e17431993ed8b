"""Numerical checks shared by the acceptance tests and ``heisgeo verify``.

Each criterion returns a CriterionResult holding one CheckResult per
sub-check, with the largest residual seen and the tolerance it was held to.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_forms as cf
from . import curvature as cv
from . import group as grp
from . import oracle as orc
from . import surfaces as sf
from .geodesic import Geodesic, cc_distance, cc_distances, min_check

# ---------------------------------------------------------------------------
# results


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    detail: str = ""

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"  [{tag}] {self.name}: max residual {self.residual:.3e}, tol {self.tol:.1e}{extra}"

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "residual": self.residual,
                "tol": self.tol, "detail": self.detail}


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title}"

    def report(self):
        return "\n".join([self.line()] + [c.line() for c in self.checks])

    def to_dict(self):
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


def _check(name, residuals, tol, detail="", cmp=None):
    res = float(np.max(residuals)) if np.size(residuals) else 0.0
    ok = (res <= tol) if cmp is None else cmp
    return CheckResult(name, bool(ok), res, tol, detail)


def _rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


# ---------------------------------------------------------------------------
# catalog and samplers


def _sample_plane(s, rng):
    r, a = rng.uniform(0.5, 2.0), rng.uniform(0, 2 * math.pi)
    return grp.Point(r * math.cos(a), r * math.sin(a), s.c)


def _sample_paraboloid(s, rng):
    r, a = rng.uniform(0.3, 1.5), rng.uniform(0, 2 * math.pi)
    return s.point(r * math.cos(a), r * math.sin(a))


def _sample_cylinder(s, rng):
    return grp.Point.of(s.chart(rng.uniform(0, 2 * math.pi), rng.uniform(-1.0, 1.0)))


def _sample_sphere(s, rng):
    u = rng.uniform(0.6, 5.4) * rng.choice([-1.0, 1.0])
    return grp.Point.of(sf.sphere_chart_point(u, rng.uniform(0, 2 * math.pi)))


def _sample_poly(s, rng):
    while True:
        x, y = rng.uniform(-1, 1, 2)
        p = s.point(x, y)
        if math.hypot(*sf.horizontal_gradient_g(s, p)) > 0.5:
            return p


POLY_TERMS = [[2, 0, 0.5], [1, 1, 0.3], [0, 3, -0.2], [0, 1, 0.4]]


def catalog():
    """name -> (surface, sampler of non-characteristic points on it)."""
    return {
        "plane": (sf.Plane(0.0), _sample_plane),
        "paraboloid": (sf.Paraboloid(1.0), _sample_paraboloid),
        "cylinder": (sf.Cylinder(1.0), _sample_cylinder),
        "cc-sphere": (sf.CCSphere(), _sample_sphere),
        "graph-poly": (sf.GraphPoly(POLY_TERMS), _sample_poly),
    }


def near_surface_point(s, foot, rng, frac=0.3):
    """Point on the metric normal at foot, signed offset well inside the lifetime."""
    lt = sf.normal_lifetime(s, foot)
    reach = min(0.25, frac * lt)
    sigma = rng.uniform(0.2, 1.0) * reach * rng.choice([-1.0, 1.0])
    return grp.Point.of(sf.metric_normal(s, foot, sigma)), sigma


# ---------------------------------------------------------------------------
# criteria


def criterion_1(rng, n=50, surfaces=None):
    """Eikonal: |FD grad_H of the oracle delta_S| = 1 near each catalog surface."""
    out = CriterionResult(1, "eikonal |grad_H delta_S| = 1 (oracle + FD)")
    for name, (s, sampler) in catalog().items():
        if surfaces and name not in surfaces:
            continue
        res = []
        for _ in range(n):
            p, _ = near_surface_point(s, sampler(s, rng), rng)
            res.append(orc.eikonal_residual(s, p))
        out.checks.append(_check(f"{name}: {n} points", res, 1e-5))
    return out


def _hess_points(s, sampler, rng, n):
    return [sampler(s, rng) for _ in range(n)]


def criterion_2(rng, n=20, surfaces=("plane", "paraboloid", "cylinder", "cc-sphere")):
    """Closed-form Hess_H delta_S against the FD Hessian of the oracle."""
    out = CriterionResult(2, "closed-form horizontal Hessian vs oracle FD Hessian")
    cat = catalog()
    for name in surfaces:
        s, sampler = cat[name]
        res = []
        for p in _hess_points(s, sampler, rng, n):
            res.append(_rel(orc.oracle_hessian(s, p), cv.hessian(s, p).hess))
        out.checks.append(_check(f"{name}: {n} points, relative Frobenius", res, 1e-4))
    return out


def _catalog_reports(rng, n):
    cat = catalog()
    names = list(cat)
    reps = []
    for k in range(n):
        s, sampler = cat[names[k % len(names)]]
        reps.append(cv.hessian(s, sampler(s, rng)))
    return reps


def criterion_3(rng, n=100):
    """Explicit entries = (v (x) v)(hI + pJ); exact zero determinant; trace = h."""
    out = CriterionResult(3, "factorisation, det = 0, trace = h")
    reps = _catalog_reports(rng, n)
    out.checks.append(_check(f"explicit vs factored, {n} points",
                             [_rel(r.hess, r.hess_factored) for r in reps], 1e-12))
    dets = [abs(r.det_factored) for r in reps]
    out.checks.append(_check("det of factored form (exact rational arithmetic)", dets, 0.0,
                             cmp=all(d == 0.0 for d in dets)))
    out.checks.append(_check("trace(hess) - h", [abs(r.trace - r.h) for r in reps], 1e-10))
    return out


def criterion_4(rng, n=100):
    """Characteristic polynomial of hess_sym is l^2 - h l - p^2/4; eigenvalue signs."""
    out = CriterionResult(4, "spectrum of the symmetrised Hessian")
    reps = _catalog_reports(rng, n)
    c1 = [abs(r.char_poly[1] + r.h) for r in reps]
    c0 = [abs(r.char_poly[2] + r.p ** 2 / 4) for r in reps]
    out.checks.append(_check("coefficient of lambda vs -h", c1, 1e-10))
    out.checks.append(_check("constant term vs -p^2/4", c0, 1e-10))
    bad = [r for r in reps if abs(r.p) > 1e-6 and not (r.eigen[0] < 0 < r.eigen[1])]
    out.checks.append(_check("opposite-sign eigenvalues when |p| > 1e-6", [float(len(bad))], 0.0))
    return out


def criterion_5(rng, n=10):
    """divergence-form h = Q/|grad|^3 = Weingarten constant = projected-curve curvature."""
    out = CriterionResult(5, "curvature equivalences (divergence, Q, Weingarten, projected curve)")
    closed, proj, normal = [], [], []
    for name, (s, sampler) in catalog().items():
        for _ in range(n):
            p = sampler(s, rng)
            h = cv.mean_curvature(s, p)
            w = cv.weingarten_map(s, p)
            closed.append(max(abs(cv.divergence_mean_curvature(s, p) - h), abs(w.k - h)))
            normal.append(abs(w.normal_component))
            proj.append(abs(cv.projected_curvature(s, p) - h))
    out.checks.append(_check("closed forms three-way", closed, 1e-10))
    out.checks.append(_check("Weingarten image stays tangent", normal, 1e-10))
    out.checks.append(_check("projected-curve curvature (RK4)", proj, 1e-5))
    return out


def criterion_6(literal=True, alphas=(0.0, 0.7, 2.5, 4.0)):
    """Plane closed forms against the oracle, trace at beta = 0, divergence of YY as beta -> pi/2."""
    out = CriterionResult(6, "plane {t=0}: gradient, Hessian, trace, divergence")
    pl = sf.Plane(0.0)
    g_res, h_res, tr = [], [], []
    for R in (0.5, 1.0, 2.0):
        for b in (-0.4, 0.0, 0.4):
            for a in alphas:
                c = cf.PlaneCoords(R, a, b)
                P = c.to_point()
                field_ = orc.SignedDistanceField(pl, P)
                g_res.append(np.max(np.abs(np.subtract(orc.fd_horizontal_gradient(field_, P),
                                                       cf.plane_grad_delta(c)))))
                h_res.append(_rel(orc.fd_horizontal_hessian(field_, P), cf.plane_hessian(c)))
                if b == 0.0:
                    tr.append(abs(np.trace(cf.plane_hessian(c))))
    out.checks.append(_check("gradient vs oracle FD", g_res, 1e-5))
    out.checks.append(_check("Hessian vs oracle FD (relative)", h_res, 1e-4))
    out.checks.append(_check("trace at beta = 0", tr, 1e-12))
    yy = [abs(cf.plane_hessian(cf.PlaneCoords(1.0, 0.0, math.pi / 2 - e))[1, 1])
          for e in (1e-1, 1e-2, 1e-3, 1e-4)]
    growing = all(x < y for x, y in zip(yy, yy[1:]))
    out.checks.append(CheckResult("|YY| grows monotonically as beta -> pi/2", growing,
                                  yy[-1], 0.0, "values " + ", ".join(f"{x:.6g}" for x in yy)))
    if literal:
        v = yy[2]
        out.checks.append(CheckResult("|YY| > 1e3 at (1, 0, pi/2 - 1e-3)", v > 1e3, v, 1e3,
                                      f"|YY| = {v:.10g}"))
    else:
        v = yy[3]
        out.checks.append(CheckResult("|YY| > 1e3 at (1, 0, pi/2 - 1e-4)", v > 1e3, v, 1e3,
                                      f"|YY| = {v:.10g}"))
    return out


def criterion_7():
    """Sphere points at distance 1; h at u = pi; small-u limit."""
    out = CriterionResult(7, "CC unit sphere: points, h(pi), u -> 0 limit")
    res = [abs(cc_distance(grp.ORIGIN, cf.sphere_point(cf.SphereParam(u, 0.3 * k))).distance - 1)
           for k, u in enumerate(np.arange(0.5, 6.01, 0.5))]
    out.checks.append(_check("d(O, sphere_point) = 1 for u = 0.5, 1, ..., 6", res, 1e-9))
    h = cf.sphere_mean_curvature(math.pi)
    out.checks.append(_check("h(pi) vs pi^2/4", [abs(h - math.pi ** 2 / 4)], 1e-12))
    s = sf.CCSphere()
    P = cf.sphere_point(cf.SphereParam(math.pi, 0.4))
    out.checks.append(_check("h(pi) vs projected-curve curvature",
                             [abs(cv.projected_curvature(s, P) - h)], 1e-5))
    u = 1e-3
    v = u / 2
    direct = (u * math.cos(u) - math.sin(u)) / (v * math.cos(v) - math.sin(v)) * u / (4 * math.sin(v))
    out.checks.append(_check("u -> 0: series at 1e-3 and direct evaluation vs 4",
                             [abs(cf.sphere_mean_curvature(u) - 4), abs(direct - 4)], 1e-6))
    return out


def criterion_8(phi=1.0):
    """Exactly one of p = u, p = 2u reproduces the oracle Hessian of delta_Sigma."""
    out = CriterionResult(8, "imaginary curvature of the sphere: u versus 2u")
    s = sf.CCSphere()
    errs = {k: [] for k in cf.SPHERE_P_CANDIDATES}
    for u in (math.pi / 2, math.pi, 3 * math.pi / 2):
        sp = cf.SphereParam(u, phi)
        H = orc.oracle_hessian(s, cf.sphere_point(sp))
        for k in errs:
            errs[k].append(_rel(H, cf.sphere_hessian(sp, k).hess))
    match = [k for k, e in errs.items() if max(e) <= 1e-4]
    for k, e in errs.items():
        out.checks.append(CheckResult(f"p = {k} vs oracle", True, max(e), 1e-4,
                                      "matches" if k in match else "rejected"))
    ok = len(match) == 1 and match[0] == cf.SPHERE_P
    winner = match[0] if len(match) == 1 else "none" if not match else "both"
    out.checks.append(CheckResult("exactly one candidate matches and it is the recorded one", ok,
                                  float(len(match)), 1.0, f"winner: {winner}"))
    return out


def criterion_9(rng, literal=True, theta=0.9):
    """Dilation homogeneity (1, 0, -1) and rotation law of the Hessian."""
    out = CriterionResult(9, "symmetries: dilations and rotations")
    pl = sf.Plane(0.0)
    d_res, g_res, h_res = [], [], []
    for _ in range(3):
        c = cf.PlaneCoords(rng.uniform(0.6, 1.5), rng.uniform(0, 2 * math.pi), rng.uniform(-0.4, 0.4))
        P = c.to_point()
        f0 = orc.SignedDistanceField(pl, P)
        d0, g0, H0 = f0.ref.value, orc.fd_horizontal_gradient(f0, P), orc.fd_horizontal_hessian(f0, P)
        for lam in (0.5, 2.0, 3.0):
            Q = grp.dilate(lam, P)
            f1 = orc.SignedDistanceField(pl, Q)
            d_res.append(abs(f1.ref.value - lam * d0) / abs(lam * d0))
            g_res.append(np.max(np.abs(np.subtract(orc.fd_horizontal_gradient(f1, Q), g0))))
            h_res.append(_rel(orc.fd_horizontal_hessian(f1, Q), H0 / lam))
    out.checks.append(_check("delta_Pi(dil_l P) = l delta_Pi(P) (relative)", d_res, 1e-8))
    out.checks.append(_check("grad_H delta_Pi degree 0", g_res, 1e-6))
    out.checks.append(_check("Hess_H delta_Pi degree -1 (relative)", h_res, 1e-4))
    R = grp.rot2(theta)
    one_sided, conj = {}, {}
    pts = {"plane": (pl, cf.PlaneCoords(1.0, 0.7, 0.3).to_point()),
           "cc-sphere": (sf.CCSphere(), cf.sphere_point(cf.SphereParam(math.pi / 2, 1.0)))}
    for name, (s, P) in pts.items():
        H0 = orc.oracle_hessian(s, P)
        H1 = orc.oracle_hessian(s, grp.rotate(theta, P))
        one_sided[name] = _rel(H1, R @ H0)
        conj[name] = _rel(H1, R @ H0 @ R.T)
    if literal:
        out.checks.append(_check("Hess(R P) = R Hess(P), one-sided product",
                                 list(one_sided.values()), 1e-4,
                                 ", ".join(f"{k} {v:.3g}" for k, v in one_sided.items())))
    out.checks.append(_check("Hess(R P) = R Hess(P) R^T", list(conj.values()), 1e-4,
                             ", ".join(f"{k} {v:.3g}" for k, v in conj.items())))
    return out


def criterion_10():
    """min_check equals sigma inside the lifetime, drops past it; plane normal lifetime pi/2."""
    out = CriterionResult(10, "geodesic lifetime and metric-normal lifetime")
    inside, past = [], []
    for phi in (0.5, 1.0, 2.0):
        g = Geodesic(grp.Point(0.3, -0.2, 0.1), 1.1, phi)
        life = g.lifetime
        for frac in (0.1, 0.3, 0.5, 0.7, 0.9, 1.0):
            inside.append(abs(min_check(g, frac * life) - frac * life))
        past.append(life + 0.5 - min_check(g, life + 0.5))
    out.checks.append(_check("min_check = sigma inside 2 pi/|phi|", inside, 1e-8))
    out.checks.append(CheckResult("deficit at lifetime + 0.5 exceeds 1e-3", min(past) > 1e-3,
                                  min(past), 1e-3, "smallest deficit"))
    pl = sf.Plane(0.0)
    P = grp.Point(1.0, 0.0, 0.0)
    life = sf.normal_lifetime(pl, P)
    before = life - 1e-3
    after = life + 1e-3
    d_before = orc.oracle_signed_distance(pl, sf.metric_normal(pl, P, before)).value
    d_after = orc.oracle_signed_distance(pl, sf.metric_normal(pl, P, after)).value
    out.checks.append(_check("pi/|p| = pi/2 at |z| = 1", [abs(life - math.pi / 2)], 1e-15))
    out.checks.append(_check("delta = sigma at pi/2 - 1e-3", [abs(d_before - before)], 1e-8))
    out.checks.append(CheckResult("delta < sigma at pi/2 + 1e-3", after - d_after > 1e-6,
                                  after - d_after, 1e-6, "deficit"))
    return out


def criterion_11(rng, n=10, h=1e-6):
    """FD Jacobian of the exponential map at sigma = 0 on the paraboloid."""
    out = CriterionResult(11, "exponential map Jacobian at sigma = 0")
    s = sf.Paraboloid(1.0)
    ent, dets = [], []
    for _ in range(n):
        r, a = rng.uniform(0.3, 1.5), rng.uniform(0, 2 * math.pi)
        u, v = r * math.cos(a), r * math.sin(a)
        cols = []
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            plus = np.asarray(sf.exp_map(s, u + e[0], v + e[1], e[2]))
            minus = np.asarray(sf.exp_map(s, u - e[0], v - e[1], -e[2]))
            cols.append((plus - minus) / (2 * h))
        Jfd = np.array(cols).T
        Jcf = sf.exp_map_jacobian_at_zero(s, u, v)
        ent.append(np.max(np.abs(Jfd - Jcf)))
        dets.append(abs(np.linalg.det(Jfd) - math.hypot(*sf.horizontal_gradient_g(s, s.point(u, v)))))
    out.checks.append(_check("FD Jacobian vs closed form, entrywise", ent, 1e-6))
    out.checks.append(_check("det vs |grad_H f|", dets, 1e-6))
    return out


# ---------------------------------------------------------------------------
# the CLI property suite


def property_suite(scale=1.0):
    """(name, callable(rng) -> CriterionResult) pairs; sample counts scale with ``scale``."""

    def k(n):
        return max(1, int(round(n * scale)))

    return [
        ("eikonal", lambda rng: criterion_1(rng, k(50))),
        ("hessian-vs-oracle", lambda rng: criterion_2(rng, k(20))),
        ("factorisation", lambda rng: criterion_3(rng, k(100))),
        ("spectrum", lambda rng: criterion_4(rng, k(100))),
        ("curvature-equivalences", lambda rng: criterion_5(rng, k(10))),
        ("plane-closed-forms", lambda rng: criterion_6(literal=False,
                                                       alphas=(0.0, 0.7, 2.5, 4.0)[:k(4)])),
        ("sphere-closed-forms", lambda rng: criterion_7()),
        ("sphere-p-arbitration", lambda rng: criterion_8()),
        ("symmetries", lambda rng: criterion_9(rng, literal=False)),
        ("lifetimes", lambda rng: criterion_10()),
        ("exp-map-jacobian", lambda rng: criterion_11(rng, k(10))),
    ]
