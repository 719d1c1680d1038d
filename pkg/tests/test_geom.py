import math

import pytest
from hypothesis import given, strategies as st

from beaconlab.errors import DegenerateInput
from beaconlab.geom import (
    CCW,
    COLLINEAR,
    CW,
    HalfPlane,
    Tolerance,
    Wedge,
    clip_convex,
    dist,
    dot,
    halfplane_intersection,
    orientation,
    orthogonal_projection,
    point_segment_distance,
    segment_intersection,
    sub,
    unit,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
points = st.tuples(finite, finite)


class TestOrientation:
    def test_basic_turns(self):
        assert orientation((0, 0), (1, 0), (0, 1)) == CCW
        assert orientation((0, 0), (0, 1), (1, 0)) == CW
        assert orientation((0, 0), (1, 1), (2, 2)) == COLLINEAR

    def test_near_collinear_snaps(self):
        # deviation below eps_geom * scale counts as collinear
        assert orientation((0, 0), (1e6, 0), (2e6, 1e-6)) == COLLINEAR
        assert orientation((0, 0), (1e6, 0), (2e6, 1e2)) == CCW

    @given(points, points, points)
    def test_antisymmetry(self, a, b, c):
        assert orientation(a, b, c) == -orientation(b, a, c)

    @given(points, points, points)
    def test_cyclic(self, a, b, c):
        assert orientation(a, b, c) == orientation(b, c, a)


class TestProjection:
    def test_axis_aligned(self):
        assert orthogonal_projection((3, 4), (0, 0), (1, 0)) == (3, 0)

    def test_diagonal_line(self):
        # foot of (0.5, 5) on the line through (0, 2) with direction (3, 1)
        p = orthogonal_projection((0.5, 5), (0, 2), (3, 1))
        assert p == pytest.approx((1.35, 2.45), abs=1e-12)

    def test_zero_direction_rejected(self):
        with pytest.raises(DegenerateInput):
            orthogonal_projection((1, 1), (0, 0), (0, 0))

    @given(points, points, points)
    def test_residual_is_perpendicular(self, p, a, d):
        if math.hypot(*d) < 1e-6:
            return
        f = orthogonal_projection(p, a, d)
        scale = max(1.0, math.hypot(*p), math.hypot(*a))
        assert abs(dot(sub(p, f), unit(d))) <= 1e-7 * scale

    @given(points, points, points)
    def test_foot_is_nearest_line_point(self, p, a, d):
        if math.hypot(*d) < 1e-6:
            return
        f = orthogonal_projection(p, a, d)
        u = unit(d)
        for t in (-1.0, -0.25, 0.25, 1.0):
            q = (f[0] + t * u[0], f[1] + t * u[1])
            assert dist(p, f) <= dist(p, q) + 1e-9


class TestHalfPlane:
    def test_normalized(self):
        hp = HalfPlane(3, 4, 10)
        assert math.hypot(hp.a, hp.b) == pytest.approx(1.0)
        assert hp.c == pytest.approx(2.0)

    def test_contains_and_value(self):
        hp = HalfPlane(1, 0, 2)  # x <= 2
        assert hp.contains((1.5, 7))
        assert not hp.contains((2.5, 7))
        assert hp.value((2, -3)) == pytest.approx(0.0)

    def test_toward(self):
        # {q : (q - (2,2)) . (0,1) >= 0} is y >= 2
        hp = HalfPlane.toward((2, 2), (0, 1))
        assert hp.contains((5, 3))
        assert not hp.contains((5, 1))
        assert hp.value((7, 2)) == pytest.approx(0.0)

    def test_degenerate_normal(self):
        with pytest.raises(DegenerateInput):
            HalfPlane(0, 0, 1)

    def test_complement_flips(self):
        hp = HalfPlane(1, 2, 3)
        q = (10, -4)
        assert hp.complement().value(q) == pytest.approx(-hp.value(q))


class TestWedge:
    def test_l_polygon_reflex_wedge(self):
        # wedge x <= 2 and y >= 2 with apex (2, 2)
        w = Wedge((2, 2), HalfPlane(1, 0, 2), HalfPlane(0, -1, -2))
        assert w.contains((1, 3))
        assert not w.contains((3, 3))
        assert not w.contains((1, 1))
        assert w.contains((2, 2))

    def test_apex_off_boundary_rejected(self):
        with pytest.raises(DegenerateInput):
            Wedge((0, 0), HalfPlane(1, 0, 2), HalfPlane(0, 1, 0))


class TestTolerance:
    def test_for_diameter(self):
        tol = Tolerance.for_diameter(10.0)
        assert tol.eps_geom == pytest.approx(1e-8)
        assert tol.eps_dist == pytest.approx(1e-6)

    def test_rejects_inverted(self):
        with pytest.raises(DegenerateInput):
            Tolerance(eps_geom=1e-3, eps_dist=1e-6)


class TestHalfPlaneIntersection:
    BBOX = (-10.0, -10.0, 10.0, 10.0)

    def test_empty_plane_list_gives_bbox(self):
        region = halfplane_intersection([], self.BBOX)
        assert len(region) == 4

    def test_single_plane(self):
        region = halfplane_intersection([HalfPlane(1, 0, 0)], self.BBOX)
        assert all(x <= 1e-12 for x, _ in region)
        area = _ring_area(region)
        assert area == pytest.approx(200.0)

    def test_infeasible(self):
        planes = [HalfPlane(1, 0, 0), HalfPlane(-1, 0, -1)]  # x <= 0 and x >= 1
        assert halfplane_intersection(planes, self.BBOX) == []

    def test_triangle(self):
        planes = [HalfPlane(-1, 0, 0), HalfPlane(0, -1, 0), HalfPlane(1, 1, 4)]
        region = halfplane_intersection(planes, self.BBOX)
        assert _ring_area(region) == pytest.approx(8.0)

    @given(st.lists(st.tuples(finite, finite, finite), max_size=8))
    def test_result_is_convex_and_feasible(self, triples):
        planes = []
        for a, b, c in triples:
            if math.hypot(a, b) > 1e-3:
                planes.append(HalfPlane(a, b, c / max(1.0, math.hypot(a, b))))
        region = halfplane_intersection(planes, self.BBOX)
        if not region:
            return
        m = len(region)
        for i in range(m):
            o = orientation(region[i], region[(i + 1) % m], region[(i + 2) % m])
            assert o != CW
        for hp in planes:
            for q in region:
                assert hp.value(q) <= 1e-6


class TestSegmentIntersection:
    def test_proper_crossing(self):
        r = segment_intersection(((0, 0), (2, 2)), ((0, 2), (2, 0)))
        assert r == pytest.approx((1, 1))

    def test_disjoint(self):
        assert segment_intersection(((0, 0), (1, 0)), ((0, 1), (1, 1))) is None

    def test_endpoint_touch_is_point(self):
        r = segment_intersection(((0, 0), (1, 1)), ((1, 1), (2, 0)))
        assert r == pytest.approx((1, 1))

    def test_t_shape_touch(self):
        r = segment_intersection(((0, 0), (2, 0)), ((1, -1), (1, 0)))
        assert r == pytest.approx((1, 0))

    def test_collinear_overlap(self):
        r = segment_intersection(((0, 0), (3, 0)), ((1, 0), (5, 0)))
        assert isinstance(r, tuple) and isinstance(r[0], tuple)
        (p, q) = r
        assert sorted([p[0], q[0]]) == pytest.approx([1.0, 3.0])

    def test_collinear_point_touch(self):
        r = segment_intersection(((0, 0), (1, 0)), ((1, 0), (2, 0)))
        assert r == pytest.approx((1, 0))

    def test_collinear_disjoint(self):
        assert segment_intersection(((0, 0), (1, 0)), ((2, 0), (3, 0))) is None

    def test_parallel_distinct(self):
        assert segment_intersection(((0, 0), (1, 0)), ((0, 1), (1, 1))) is None

    @given(points, points, points, points)
    def test_symmetry(self, a, b, c, d):
        r1 = segment_intersection((a, b), (c, d))
        r2 = segment_intersection((c, d), (a, b))
        assert (r1 is None) == (r2 is None)

    @given(points, points, st.floats(min_value=0.05, max_value=0.95))
    def test_point_on_segment_detected(self, a, b, t):
        if dist(a, b) < 1e-3:
            return
        q = (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)
        r = segment_intersection((a, b), (q, q))
        assert r is not None


class TestClipConvex:
    def test_square_halved(self):
        square = [(0, 0), (2, 0), (2, 2), (0, 2)]
        out = clip_convex(square, HalfPlane(1, 0, 1))
        assert _ring_area(out) == pytest.approx(2.0)

    def test_no_cut(self):
        square = [(0, 0), (1, 0), (1, 1), (0, 1)]
        out = clip_convex(square, HalfPlane(1, 0, 5))
        assert out == square

    def test_all_cut(self):
        square = [(0, 0), (1, 0), (1, 1), (0, 1)]
        assert clip_convex(square, HalfPlane(1, 0, -1)) == []


class TestPointSegmentDistance:
    def test_interior_foot(self):
        assert point_segment_distance((1, 1), (0, 0), (2, 0)) == pytest.approx(1.0)

    def test_clamped_to_endpoint(self):
        assert point_segment_distance((3, 4), (0, 0), (0, 1)) == pytest.approx(math.hypot(3, 3))


def _ring_area(ring):
    s = 0.0
    for i in range(len(ring)):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % len(ring)]
        s += x1 * y2 - x2 * y1
    return 0.5 * s
