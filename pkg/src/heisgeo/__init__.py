"""Horizontal geometry of surfaces in the first Heisenberg group.

Geodesics and the Carnot-Caratheodory distance, surface frames and metric
normals, closed-form mean and imaginary curvature and the horizontal Hessian
of the signed distance, plus a brute-force oracle that checks them.
"""

from .curvature import (CurvatureReport, hessian, imaginary_curvature, mean_curvature,
                        projected_curvature, q_form, weingarten)
from .errors import (CharacteristicPointError, HeisgeoError, InvalidArgument,
                     SingularConfigurationError, VerticalTangentError)
from .geodesic import DistanceResult, Geodesic, ball_profile, cc_distance, min_check
from .group import ORIGIN, HVec, Point, dilate, frame_at, group_mul, inverse, rotate
from .oracle import (FDConfig, eikonal_residual, fd_horizontal_gradient, fd_horizontal_hessian,
                     oracle_signed_distance)
from .surfaces import (CCSphere, Cylinder, GraphPoly, Paraboloid, Plane, Surface, frame,
                       horizontal_gradient, metric_normal, surface_from_json)

__version__ = "0.1.0"

__all__ = [
    "CCSphere", "CharacteristicPointError", "CurvatureReport", "Cylinder", "DistanceResult",
    "FDConfig", "Geodesic", "GraphPoly", "HVec", "HeisgeoError", "InvalidArgument", "ORIGIN",
    "Paraboloid", "Plane", "Point", "SingularConfigurationError", "Surface", "VerticalTangentError",
    "ball_profile", "cc_distance", "dilate", "eikonal_residual", "fd_horizontal_gradient",
    "fd_horizontal_hessian", "frame", "frame_at", "group_mul", "hessian", "horizontal_gradient",
    "imaginary_curvature", "inverse", "mean_curvature", "metric_normal", "min_check",
    "oracle_signed_distance", "projected_curvature", "q_form", "rotate", "surface_from_json",
    "weingarten",
]
