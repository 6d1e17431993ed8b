import json
import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings, strategies as st

from heisgeo import closed_forms as cf
from heisgeo import group as grp
from heisgeo import surfaces as sf
from heisgeo.errors import CharacteristicPointError, InvalidArgument, VerticalTangentError
from heisgeo.geodesic import cc_distance

PLANE = sf.Plane(0.0)
PARAB = sf.Paraboloid(1.0)


def _fd_velocity(fun, s, h=1e-6):
    return (np.asarray(fun(s + h)) - np.asarray(fun(s - h))) / (2 * h)


class TestHorizontalGradient:
    def test_plane(self):
        assert sf.horizontal_gradient(PLANE, (1, 0, 0)) == (0.0, -2.0)
        assert sf.horizontal_gradient(PLANE, (0, 0, 0)) == (0.0, 0.0)

    def test_paraboloid(self):
        npt.assert_allclose(sf.horizontal_gradient(PARAB, (1, 0, 1)), (-2, -2))

    def test_off_surface_rejected(self):
        with pytest.raises(InvalidArgument):
            sf.horizontal_gradient(PLANE, (1, 0, 0.1))

    def test_vectorised(self):
        xg, yg = sf.horizontal_gradient_g(PARAB, np.array([[1.0, 0, 1], [0, 1, 1]]))
        npt.assert_allclose(xg, [-2, 2])
        npt.assert_allclose(yg, [-2, -2])


class TestFrame:
    def test_plane_example(self):
        fr = sf.frame(PLANE, (1, 0, 0))
        npt.assert_allclose(fr.n.components, (0, -1))
        npt.assert_allclose(fr.v.components, (-1, 0))

    def test_paraboloid_norm(self):
        assert sf.frame(PARAB, (1, 0, 1)).grad_norm == pytest.approx(2 * math.sqrt(2))

    def test_characteristic(self):
        with pytest.raises(CharacteristicPointError) as exc:
            sf.frame(PLANE, (0, 0, 0))
        assert "characteristic" in str(exc.value)

    def test_orthonormal_on_catalog(self, catalog, rng):
        for s, sampler in catalog.values():
            for _ in range(10):
                fr = sf.frame(s, sampler(s, rng))
                assert fr.v.dot(fr.n) == 0.0
                assert fr.v.norm() == pytest.approx(1.0, abs=1e-15)
                npt.assert_allclose(fr.n.components, np.array([fr.Xg, fr.Yg]) / fr.grad_norm)


class TestCharPlaneDistance:
    def test_plane(self):
        assert sf.char_plane_distance(PLANE, (1, 0, 0)) == pytest.approx(1.0)
        assert sf.char_plane_distance(PLANE, (0, -1, 0)) == pytest.approx(1.0)

    def test_paraboloid(self):
        assert sf.char_plane_distance(PARAB, (1, 0, 1)) == pytest.approx(math.sqrt(2))

    def test_graph_is_half_gradient(self, rng):
        s = sf.GraphPoly([[2, 0, 0.5], [0, 2, -0.3], [1, 0, 0.2]])
        for _ in range(10):
            p = s.point(*rng.uniform(-1, 1, 2))
            assert sf.char_plane_distance(s, p) == pytest.approx(math.hypot(*sf.horizontal_gradient(s, p)) / 2)

    def test_vertical_tangent(self):
        with pytest.raises(VerticalTangentError):
            sf.char_plane_distance(sf.Cylinder(1.0), (1, 0, 0.3))


class TestMetricNormal:
    def test_sigma_zero(self):
        p = PARAB.point(0.4, -0.2)
        assert sf.metric_normal(PARAB, p, 0.0) == p

    def test_plane_closed_form(self, rng):
        for _ in range(10):
            x, y = rng.uniform(-2, 2, 2)
            sig = rng.uniform(-1, 1) * math.pi * math.hypot(x, y) / 2
            npt.assert_allclose(sf.metric_normal(PLANE, (x, y, 0), sig), cf.plane_metric_normal(x, y, sig),
                                atol=1e-12)
        # closed form of the first coordinate on the plane
        x, y, sig = 0.6, -0.8, 0.3
        w = 2 * sig / math.hypot(x, y)
        assert sf.metric_normal(PLANE, (x, y, 0), sig)[0] == pytest.approx(
            x / 2 * (1 + math.cos(w)) + y / 2 * math.sin(w), abs=1e-14)

    def test_sphere_closed_form(self):
        s = sf.CCSphere()
        for u, phi in [(1.0, 0.3), (math.pi, 2.0), (5.0, -1.0)]:
            sp = cf.SphereParam(u, phi)
            for sig in (-0.2, 0.1, 0.4):
                npt.assert_allclose(sf.metric_normal(s, cf.sphere_point(sp), sig),
                                    cf.sphere_metric_normal(sp, sig), atol=1e-10)

    def test_unit_speed_and_initial_direction(self, catalog, rng):
        for s, sampler in catalog.values():
            p = sampler(s, rng)
            fr = sf.frame(s, p)
            for sig in (0.0, 0.1, -0.15):
                q = np.asarray(sf.metric_normal(s, p, sig))
                a, b = grp.horizontal_components(q, _fd_velocity(lambda x: sf.metric_normal(s, p, x), sig),
                                                 tol=1e-6)
                assert math.hypot(a, b) == pytest.approx(1.0, abs=1e-8)
                if sig == 0.0:
                    npt.assert_allclose((a, b), fr.n.components, atol=1e-8)

    def test_geodesic_form(self):
        p = PARAB.point(0.3, 0.5)
        g = sf.metric_normal_geodesic(PARAB, p)
        npt.assert_allclose(g.eval(0.2), sf.metric_normal(PARAB, p, 0.2), atol=1e-14)

    def test_lifetime(self):
        assert sf.normal_lifetime(PLANE, (1, 0, 0)) == pytest.approx(math.pi / 2)
        assert sf.normal_lifetime(sf.Cylinder(1.0), (1, 0, 0)) == math.inf

    def test_straight_when_vertical(self):
        q = sf.metric_normal(sf.Cylinder(2.0), (2, 0, 0.5), 0.3)
        npt.assert_allclose(q, (2.3, 0, 0.5), atol=1e-15)


class TestExpMap:
    def test_sigma_zero(self):
        npt.assert_allclose(sf.exp_map(PARAB, 0.4, 0.1, 0.0), (0.4, 0.1, 0.17))

    def test_graph_only(self):
        with pytest.raises(InvalidArgument):
            sf.exp_map(sf.Cylinder(1.0), 0.0, 0.0, 0.1)

    def test_jacobian(self, rng):
        h = 1e-6
        for _ in range(5):
            u, v = rng.uniform(-1.2, 1.2, 2)
            cols = []
            for e in np.eye(3):
                plus = np.asarray(sf.exp_map(PARAB, u + h * e[0], v + h * e[1], h * e[2]))
                minus = np.asarray(sf.exp_map(PARAB, u - h * e[0], v - h * e[1], -h * e[2]))
                cols.append((plus - minus) / (2 * h))
            J = np.array(cols).T
            npt.assert_allclose(J, sf.exp_map_jacobian_at_zero(PARAB, u, v), atol=1e-6)
            grad = math.hypot(*sf.horizontal_gradient(PARAB, PARAB.point(u, v)))
            assert np.linalg.det(J) == pytest.approx(grad, abs=1e-6)


class TestCatalog:
    def test_derivatives(self, catalog, rng):
        # central differences of the value converge to the analytic partials at O(h^2)
        for s, sampler in catalog.values():
            for _ in range(5):
                p = sampler(s, rng)
                e1, e2 = s.check_derivatives(p, h=1e-3), s.check_derivatives(p, h=5e-4)
                assert e2 < 1e-9 or e2 < e1 / 3.5

    def test_on_surface(self, catalog, rng):
        for s, sampler in catalog.values():
            for _ in range(20):
                assert s.contains(sampler(s, rng))

    def test_sphere_points_on_unit_sphere(self, rng):
        s = sf.CCSphere()
        for u in rng.uniform(-2 * math.pi + 0.01, 2 * math.pi - 0.01, 30):
            p = sf.sphere_chart_point(u, rng.uniform(0, 2 * math.pi))
            assert cc_distance((0, 0, 0), p).distance == pytest.approx(1.0, abs=1e-9)
            if abs(u) > 0.05:
                assert abs(float(s.g(p))) < 1e-9

    def test_sphere_domain(self):
        with pytest.raises(InvalidArgument):
            sf.CCSphere().f(1.2, 0.0)

    def test_side(self):
        assert PLANE.side((0, 0, -1)) == -1 and PLANE.side((0, 0, 1)) == 1
        s = sf.CCSphere()
        assert s.side((0, 0, 0.1)) == -1 and s.side((0, 0, 1.0)) == 1
        assert sf.Cylinder(1.0).side((0.2, 0.1, 3.0)) == -1

    @pytest.mark.parametrize("doc", [
        {"type": "plane", "c": 0.5}, {"type": "paraboloid", "a": 2.0}, {"type": "cylinder", "r": 2.0},
        {"type": "cc-sphere"}, {"type": "graph-poly", "coeffs": [[2, 0, 1.0], [0, 1, -0.5]]},
    ])
    def test_json_round_trip(self, doc):
        s = sf.surface_from_json(json.dumps(doc))
        assert s.to_json() == doc
        assert sf.surface_from_json(s.to_json()).to_json() == doc

    @pytest.mark.parametrize("doc", [
        {"type": "torus"}, {"type": "cylinder", "r": -1}, {"type": "graph-poly"},
        {"type": "plane", "c": 0, "extra": 1}, {"c": 1},
    ])
    def test_json_rejected(self, doc):
        with pytest.raises(InvalidArgument):
            sf.surface_from_json(doc)

    def test_graph_poly_values(self):
        s = sf.GraphPoly([[2, 0, 0.5], [1, 1, 0.3], [0, 3, -0.2]])
        x, y = 0.7, -0.4
        assert s.f(x, y) == pytest.approx(0.5 * x * x + 0.3 * x * y - 0.2 * y ** 3)
        npt.assert_allclose(s.f1(x, y), (x + 0.3 * y, 0.3 * x - 0.6 * y * y))


class TestImplicit:
    def test_fd_fallback_flagged_and_close(self):
        ana = sf.Paraboloid(1.0)
        imp = sf.ImplicitSurface(lambda p: p[..., 2] - p[..., 0] ** 2 - p[..., 1] ** 2)
        assert imp.fd_fallback
        p = np.array([0.3, -0.5, 0.34])
        npt.assert_allclose(imp.dg(p), ana.dg(p), atol=1e-9)
        npt.assert_allclose(imp.d2g(p), ana.d2g(p), atol=1e-5)

    def test_analytic_not_flagged(self):
        imp = sf.ImplicitSurface(lambda p: p[..., 2], dg=lambda p: np.array([0.0, 0.0, 1.0]),
                                 d2g=lambda p: np.zeros((3, 3)))
        assert not imp.fd_fallback

    def test_missing_chart(self):
        with pytest.raises(InvalidArgument):
            sf.ImplicitSurface(lambda p: p[..., 2]).chart(0, 0)
