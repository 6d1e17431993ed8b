import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import assume, given, settings, strategies as st

from heisgeo import group as grp
from heisgeo.errors import InvalidArgument
from heisgeo.geodesic import (Geodesic, ball_profile, cc_distance, cc_distances, connecting_geodesic,
                              min_check, origin_geodesic, profile_ratio, solve_profile_angle)
from heisgeo.group import ORIGIN

coord = st.floats(min_value=-3, max_value=3, allow_nan=False)
points = st.tuples(coord, coord, coord)


def _fd_speed(g, s, h=1e-5):
    a = np.asarray(g.eval(s - h))
    b = np.asarray(g.eval(s + h))
    mid = np.asarray(g.eval(s))
    w = (b - a) / (2 * h)
    return math.hypot(*grp.horizontal_components(mid, w, tol=1e-6))


class TestGeodesicEval:
    def test_straight(self):
        g = Geodesic(ORIGIN, 0.0, 0.0)
        npt.assert_allclose(g.eval(2.5), (2.5, 0, 0), atol=1e-15)
        assert g.lifetime == math.inf

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 4.0])
    def test_full_turn(self, alpha):
        g = Geodesic(ORIGIN, alpha, 2.0)
        npt.assert_allclose(g.eval(math.pi), (0, 0, math.pi), atol=1e-12)
        assert g.lifetime == pytest.approx(math.pi)

    @pytest.mark.xfail(strict=True, reason="the two branches differ by the first-order term "
                       "(s^2 sin a/2, -s^2 cos a/2, s^3/3) phi, about 5e-7 at phi = 1e-6")
    def test_small_phi_limit_literal(self):
        npt.assert_allclose(Geodesic(ORIGIN, 0.3, 1e-6).eval(1.0), Geodesic(ORIGIN, 0.3, 0).eval(1.0),
                            rtol=0, atol=1e-8)

    @pytest.mark.parametrize("phi", [1e-6, 1e-9, 1e-12])
    def test_small_phi_continuity(self, phi):
        a, s = 0.3, 1.0
        slope = np.array([s * s * math.sin(a) / 2, -s * s * math.cos(a) / 2, s ** 3 / 3])
        diff = np.subtract(Geodesic(ORIGIN, a, phi).eval(s), Geodesic(ORIGIN, a, 0).eval(s))
        npt.assert_allclose(diff, phi * slope, rtol=0, atol=max(phi * phi, 1e-16))

    def test_vectorised_eval(self):
        pts = Geodesic((1, 2, 3), 0.4, 1.3).eval(np.linspace(0, 1, 7))
        assert pts.shape == (7, 3)

    @given(st.floats(0, 2 * math.pi), st.floats(-4, 4), st.floats(0.05, 3), points)
    def test_unit_speed(self, alpha, phi, s, base):
        assert _fd_speed(Geodesic(base, alpha, phi), s) == pytest.approx(1.0, abs=1e-6)

    @given(st.floats(0, 2 * math.pi), st.floats(-4, 4), st.floats(0, 3),
           st.sampled_from([0.5, 2.0, 3.0, -1.5]))
    def test_dilation_reparametrises(self, alpha, phi, s, lam):
        lhs = grp.dilate(lam, origin_geodesic(alpha, phi, s))
        if lam > 0:
            rhs = origin_geodesic(alpha, phi / lam, lam * s)
            npt.assert_allclose(lhs, rhs, atol=1e-10)
        else:
            # a negative factor also turns the initial direction around
            rhs = origin_geodesic(alpha + math.pi, phi / abs(lam), abs(lam) * s)
            npt.assert_allclose(lhs, rhs, atol=1e-10)


class TestBallProfile:
    def test_examples(self):
        npt.assert_allclose(ball_profile(1, math.pi), (2 / math.pi, 2 / math.pi), atol=1e-15)
        npt.assert_allclose(ball_profile(1, 0), (1, 0), atol=1e-15)
        npt.assert_allclose(ball_profile(1, 2 * math.pi), (0, 1 / math.pi), atol=1e-15)

    def test_bad_arguments(self):
        with pytest.raises(InvalidArgument):
            ball_profile(0, 0)
        with pytest.raises(InvalidArgument):
            ball_profile(1, 7)

    def test_profile_ratio_monotone(self):
        th = np.linspace(1e-3, math.pi - 1e-3, 2000)
        assert np.all(np.diff(profile_ratio(th)) > 0)
        assert profile_ratio(1e-3) / 1e-3 == pytest.approx(2 / 3, rel=1e-6)

    @given(st.floats(0, 1e6))
    def test_solve_profile_angle(self, mu):
        th = solve_profile_angle(mu)
        assert 0 <= th < math.pi
        assert float(profile_ratio(th)) == pytest.approx(mu, rel=1e-11, abs=1e-14)


class TestDistance:
    def test_examples(self):
        assert cc_distance((1, 2, 3), (1, 2, 3)).distance == 0.0
        r = cc_distance(ORIGIN, (0, 0, 1 / math.pi))
        assert r.distance == pytest.approx(1.0, abs=1e-15)
        assert not r.unique
        r = cc_distance(ORIGIN, (2 / math.pi, 0, 2 / math.pi))
        assert r.distance == pytest.approx(1.0, abs=1e-12)
        assert r.phi == pytest.approx(math.pi, abs=1e-10)

    def test_center_representative(self):
        r = cc_distance(ORIGIN, (0, 0, -2.0))
        assert r.alpha == 0.0 and not r.unique
        assert r.distance == pytest.approx(math.sqrt(2 * math.pi))

    def test_horizontal_line(self):
        assert cc_distance(ORIGIN, (3, 4, 0)).distance == pytest.approx(5.0)

    @given(st.floats(0, 2 * math.pi), st.floats(-6, 6), st.floats(0.1, 2), points)
    def test_round_trip(self, alpha, phi, s, base):
        # inside the lifetime the geodesic minimises, so its endpoint lies at distance s
        assume(abs(phi) * s < 2 * math.pi - 1e-3)
        g = Geodesic(base, alpha, phi)
        assert cc_distance(base, g.eval(s)).distance == pytest.approx(s, rel=1e-9)

    @given(points, st.sampled_from([0.5, 2.0, 3.0]))
    def test_homogeneity(self, q, lam):
        d = cc_distance(ORIGIN, q).distance
        assert cc_distance(ORIGIN, grp.dilate(lam, q)).distance == pytest.approx(lam * d, rel=1e-9,
                                                                                  abs=1e-14)

    @given(points, points, points)
    def test_left_invariance(self, p, q, r):
        d = cc_distance(p, q).distance
        assert cc_distance(grp.group_mul(r, p), grp.group_mul(r, q)).distance == pytest.approx(
            d, rel=1e-9, abs=1e-12)

    @given(points, st.floats(-7, 7))
    def test_rotation_invariance(self, q, th):
        assert cc_distance(ORIGIN, grp.rotate(th, q)).distance == pytest.approx(
            cc_distance(ORIGIN, q).distance, rel=1e-9, abs=1e-14)

    @given(points, points, points)
    def test_triangle_inequality(self, p, q, r):
        d = lambda a, b: cc_distance(a, b).distance
        assert d(p, r) <= d(p, q) + d(q, r) + 1e-9

    @given(points, points)
    def test_symmetry_and_zero(self, p, q):
        assume(p != q)
        assert cc_distance(p, q).distance > 0
        assert cc_distance(p, q).distance == pytest.approx(cc_distance(q, p).distance, rel=1e-9)

    def test_vectorised_matches_scalar(self, rng):
        p = rng.uniform(-2, 2, (20, 3))
        q = rng.uniform(-2, 2, (20, 3))
        ref = [cc_distance(a, b).distance for a, b in zip(p, q)]
        npt.assert_allclose(cc_distances(p, q), ref, rtol=1e-14)

    def test_connecting_geodesic(self):
        p, q = (0.2, -0.1, 0.4), (1.0, 0.5, -0.3)
        g, d = connecting_geodesic(p, q)
        npt.assert_allclose(g.eval(d), q, atol=1e-10)


class TestMinCheck:
    def test_examples(self):
        assert min_check(Geodesic(ORIGIN, 0.0, 1.0), math.pi) == pytest.approx(math.pi, abs=1e-8)
        assert min_check(Geodesic(ORIGIN, 0.0, 0.0), 5.0) == pytest.approx(5.0, abs=1e-10)
        assert min_check(Geodesic(ORIGIN, 0.0, 2.0), math.pi + 0.5) < math.pi + 0.5

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidArgument):
            min_check(Geodesic(ORIGIN, 0, 1), 0.0)

    def test_eikonal_of_point_distance(self, rng):
        # the FD horizontal gradient of d(O, .) has unit norm off the center
        from heisgeo.oracle import FDConfig, fd_horizontal_gradient

        field = lambda q: float(cc_distances(ORIGIN, np.asarray(q)))
        res = []
        while len(res) < 50:
            q = rng.uniform(-1.5, 1.5, 3)
            if math.hypot(q[0], q[1]) <= 0.2:
                continue
            res.append(abs(math.hypot(*fd_horizontal_gradient(field, q, FDConfig())) - 1))
        assert max(res) < 1e-5
