"""Command-line front end: JSON/CSV tables for the library and the verify suite."""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import closed_forms as cf
from . import curvature as cv
from . import oracle as orc
from . import surfaces as sf
from . import verification as ver
from .errors import HeisgeoError, InvalidArgument
from .geodesic import Geodesic, ball_profile, cc_distance, cc_distances
from .group import ORIGIN, Point

COMMANDS = ("dist", "geodesic", "sphere-profile", "surfdist", "curvature", "hessian", "ruling",
            "verify")

NAMED_SURFACES = {
    "plane": {"type": "plane", "c": 0.0},
    "paraboloid": {"type": "paraboloid", "a": 1.0},
    "cylinder": {"type": "cylinder", "r": 1.0},
    "cc-sphere": {"type": "cc-sphere"},
    "graph-poly": {"type": "graph-poly", "coeffs": ver.POLY_TERMS},
}

CSV_COLUMNS = {
    "dist": "distance,phi,alpha,unique",
    "geodesic": "sigma,x,y,t",
    "sphere-profile": "phi,modz,t",
    "surfdist": "x,y,t,oracle,closed_form,foot_x,foot_y,foot_t,trusted",
    "curvature": "x,y,t,h,p,Q,v_a,v_b,n_a,n_b",
    "hessian": "x,y,t,h,p,xx,yx,xy,yy,sym_00,sym_01,sym_11,eig_0,eig_1,det_factored",
    "ruling": "u,x,y,t",
    "verify": "criterion,property,check,passed,residual,tol,detail",
}


class ConfigError(Exception):
    """Bad command-line configuration (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    surface: dict = None
    points: list = field(default_factory=list)
    values: list = field(default_factory=list)
    output: str = "json"
    seed: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.output not in ("json", "csv"):
            raise ConfigError(f"output must be json or csv, got {self.output!r}")
        if self.command in ("surfdist", "curvature", "hessian"):
            if self.surface is None:
                raise ConfigError(f"{self.command} needs --surface")
            if not self.points:
                raise ConfigError(f"{self.command} needs at least one --point")
        if not 0 < self.scale <= 1:
            raise ConfigError("--scale must lie in (0, 1]")


def parse_surface(text):
    """Catalog name, inline JSON, or @path to a JSON file."""
    if text in NAMED_SURFACES:
        return dict(NAMED_SURFACES[text])
    try:
        if text.startswith("@"):
            with open(text[1:]) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        names = ", ".join(NAMED_SURFACES)
        raise ConfigError(f"--surface must be one of {names}, JSON or @file ({exc})") from None


def thread_count():
    raw = os.environ.get("HEISGEO_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HEISGEO_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"HEISGEO_THREADS must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# commands: each returns (exit code, list of row dicts, json payload)


def _pt(p):
    return [float(c) for c in p]


def _cmd_dist(cfg):
    if len(cfg.values) != 6:
        raise ConfigError("dist needs six numbers: x1 y1 t1 x2 y2 t2")
    r = cc_distance(Point(*cfg.values[:3]), Point(*cfg.values[3:]))
    row = {"distance": r.distance, "phi": r.phi, "alpha": r.alpha, "unique": r.unique}
    return 0, [row], row


def _cmd_geodesic(cfg):
    v = cfg.values
    if len(v) not in (5, 8):
        raise ConfigError("geodesic needs alpha phi s0 s1 n [x y t]")
    alpha, phi, s0, s1, n = v[:5]
    if n != int(n) or n < 1:
        raise ConfigError("sample count n must be a positive integer")
    base = Point(*v[5:8]) if len(v) == 8 else ORIGIN
    g = Geodesic(base, alpha, phi)
    sig = np.linspace(s0, s1, int(n))
    pts = np.atleast_2d(np.asarray(g.eval(sig)))
    rows = [{"sigma": float(s), "x": float(p[0]), "y": float(p[1]), "t": float(p[2])}
            for s, p in zip(sig, pts)]
    return 0, rows, {"base": _pt(base), "alpha": g.alpha, "phi": phi,
                     "lifetime": g.lifetime if math.isfinite(g.lifetime) else None, "samples": rows}


def _cmd_sphere_profile(cfg):
    if len(cfg.values) != 2:
        raise ConfigError("sphere-profile needs r n")
    r, n = cfg.values
    if n != int(n) or n < 2:
        raise ConfigError("sample count n must be an integer >= 2")
    phis = np.linspace(-2 * math.pi / r, 2 * math.pi / r, int(n)) if r > 0 else np.zeros(int(n))
    modz, t = ball_profile(r, phis)
    rows = [{"phi": float(a), "modz": float(b), "t": float(c)} for a, b, c in zip(phis, modz, t)]
    return 0, rows, {"r": r, "rows": rows}


def _closed_form_distance(doc, p):
    kind = doc["type"]
    if kind == "plane" and doc.get("c", 0.0) == 0.0:
        if math.hypot(p[0], p[1]) == 0:
            # beta -> +-pi/2 limit: t = R^2 beta, so R beta = sqrt(pi |t| / 2)
            return math.copysign(math.sqrt(math.pi * abs(p[2]) / 2), p[2])
        return cf.PlaneCoords.from_point(p).delta
    if kind == "cc-sphere":
        return float(cc_distances(ORIGIN, np.asarray(p))) - 1.0
    return None


def _cmd_surfdist(cfg):
    s = sf.surface_from_json(cfg.surface)
    rows = []
    for p in cfg.points:
        o = orc.oracle_signed_distance(s, p)
        rows.append({"x": p[0], "y": p[1], "t": p[2], "oracle": o.value,
                     "closed_form": _closed_form_distance(cfg.surface, p),
                     "foot_x": o.foot[0], "foot_y": o.foot[1], "foot_t": o.foot[2],
                     "trusted": o.trusted})
    return 0, rows, {"surface": cfg.surface, "results": rows}


def _cmd_curvature(cfg):
    s = sf.surface_from_json(cfg.surface)
    rows, full = [], []
    for p in cfg.points:
        r = cv.hessian(s, p)
        x, y, t = _pt(r.point)
        rows.append({"x": x, "y": y, "t": t, "h": r.h, "p": r.p, "Q": r.Q,
                     "v_a": r.v.a, "v_b": r.v.b, "n_a": r.n.a, "n_b": r.n.b})
        full.append({k: r.to_dict()[k] for k in ("point", "h", "p", "Q", "v", "n")})
    return 0, rows, {"surface": cfg.surface, "results": full}


def _cmd_hessian(cfg):
    s = sf.surface_from_json(cfg.surface)
    rows, full = [], []
    for p in cfg.points:
        r = cv.hessian(s, p)
        x, y, t = _pt(r.point)
        H, S = r.hess, r.hess_sym
        rows.append({"x": x, "y": y, "t": t, "h": r.h, "p": r.p,
                     "xx": H[0, 0], "yx": H[0, 1], "xy": H[1, 0], "yy": H[1, 1],
                     "sym_00": S[0, 0], "sym_01": S[0, 1], "sym_11": S[1, 1],
                     "eig_0": r.eigen[0], "eig_1": r.eigen[1], "det_factored": r.det_factored})
        full.append(r.to_dict())
    return 0, rows, {"surface": cfg.surface, "results": full}


def _cmd_ruling(cfg):
    if len(cfg.values) != 4:
        raise ConfigError("ruling needs theta u0 u1 step")
    theta, u0, u1, step = cfg.values
    r = cf.sphere_ruling(theta, (u0, u1), step)
    rows = [{"u": float(u), "x": float(p[0]), "y": float(p[1]), "t": float(p[2])}
            for u, p in zip(r.u, r.points)]
    return 0, rows, {"theta": theta, "truncated": r.truncated, "samples": rows}


def _cmd_verify(cfg):
    suite = ver.property_suite(cfg.scale)

    def job(k):
        name, fn = suite[k]
        # one generator per property, so scheduling cannot change the samples
        return name, fn(np.random.default_rng([cfg.seed, k]))

    with ThreadPoolExecutor(max_workers=min(thread_count(), len(suite))) as ex:
        results = list(ex.map(job, range(len(suite))))
    rows, props = [], []
    for name, res in results:
        props.append({"property": name, **res.to_dict()})
        for c in res.checks:
            rows.append({"criterion": res.number, "property": name, "check": c.name,
                         "passed": c.passed, "residual": c.residual, "tol": c.tol,
                         "detail": c.detail})
    ok = all(res.passed for _, res in results)
    return (0 if ok else 1), rows, {"seed": cfg.seed, "scale": cfg.scale, "passed": ok,
                                    "properties": props}


HANDLERS = {
    "dist": _cmd_dist,
    "geodesic": _cmd_geodesic,
    "sphere-profile": _cmd_sphere_profile,
    "surfdist": _cmd_surfdist,
    "curvature": _cmd_curvature,
    "hessian": _cmd_hessian,
    "ruling": _cmd_ruling,
    "verify": _cmd_verify,
}


# ---------------------------------------------------------------------------
# serialisation


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(command, rows):
    cols = CSV_COLUMNS[command].split(",")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        r = _plain(r)
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def to_json(payload):
    # json emits floats via repr: shortest string that round-trips
    return json.dumps(_plain(payload), indent=2, sort_keys=False, allow_nan=False) + "\n"


def run(cfg):
    """Execute a RunConfig; returns (exit code, serialised report)."""
    code, rows, payload = HANDLERS[cfg.command](cfg)
    text = to_csv(cfg.command, rows) if cfg.output == "csv" else to_json(payload)
    return code, text


# ---------------------------------------------------------------------------
# argument parsing


def _help(cmd, text):
    return f"{text}\n\nCSV columns: {CSV_COLUMNS[cmd]}"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="heisgeo", description="Horizontal geometry of surfaces in the "
                                 "Heisenberg group: distances, geodesics, curvatures, signed-distance "
                                 "Hessians and a verification suite.")
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("dist", parents=[common], formatter_class=fmt,
                       description=_help("dist", "CC distance d(P, Q) and a minimising geodesic."))
    p.add_argument("values", nargs=6, type=float, metavar="X", help="x1 y1 t1 x2 y2 t2")

    p = sub.add_parser("geodesic", parents=[common], formatter_class=fmt,
                       description=_help("geodesic", "Samples of the unit-speed geodesic with initial "
                                         "angle alpha and curvature phi over sigma in [s0, s1]."))
    p.add_argument("values", nargs=5, type=float, metavar="V", help="alpha phi s0 s1 n")
    p.add_argument("--base", nargs=3, type=float, metavar=("X", "Y", "T"))

    p = sub.add_parser("sphere-profile", parents=[common], formatter_class=fmt,
                       description=_help("sphere-profile", "n rows (phi, |z|, t) of the CC sphere of "
                                         "radius r, phi from -2 pi/r to 2 pi/r."))
    p.add_argument("values", nargs=2, type=float, metavar="V", help="r n")

    p = sub.add_parser("ruling", parents=[common], formatter_class=fmt,
                       description=_help("ruling", "Samples of the horizontal ruling of the unit CC "
                                         "sphere with rotation theta, u in [u0, u1]."))
    p.add_argument("values", nargs=4, type=float, metavar="V", help="theta u0 u1 step")

    for cmd, text in (("surfdist", "Oracle signed distance to the surface (negative inside), with "
                       "the closed form where one exists (plane t = 0, CC unit sphere)."),
                      ("curvature", "Mean curvature h, imaginary curvature p, Q and the frame (v, n)."),
                      ("hessian", "Horizontal Hessian of the signed distance, layout [[XX, YX], "
                       "[XY, YY]], its symmetrisation and spectrum.")):
        p = sub.add_parser(cmd, parents=[common], formatter_class=fmt, description=_help(cmd, text))
        p.add_argument("--surface", required=True,
                       help=f"one of {', '.join(NAMED_SURFACES)}, a JSON object, or @file.json")
        p.add_argument("--point", nargs=3, type=float, action="append", required=True,
                       metavar=("X", "Y", "T"), help="repeatable")

    p = sub.add_parser("verify", parents=[common], formatter_class=fmt,
                       description=_help("verify", "Run the invariant suite; exit 1 on any failure. "
                                         "HEISGEO_THREADS caps the worker threads."))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0,
                   help="fraction of the default sample counts, in (0, 1]")
    return ap


def config_from_args(ns):
    values = list(getattr(ns, "values", None) or [])
    if ns.command == "geodesic" and ns.base:
        values += ns.base
    surface = parse_surface(ns.surface) if getattr(ns, "surface", None) else None
    return RunConfig(command=ns.command, surface=surface,
                     points=[tuple(p) for p in (getattr(ns, "point", None) or [])],
                     values=values, output=ns.output, seed=getattr(ns, "seed", 0),
                     scale=getattr(ns, "scale", 1.0))


def main(argv=None):
    ap = build_parser()
    ns = ap.parse_args(argv)  # argparse exits with 2 on malformed flags
    try:
        cfg = config_from_args(ns)
        code, text = run(cfg)
    except (ConfigError, InvalidArgument, HeisgeoError) as exc:
        print(f"heisgeo {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
