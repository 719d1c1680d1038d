"""Triangulation: monotone-decomposition pipeline vs the ear-clipping oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beaconlab.polygon import SimplePolygon
from beaconlab.triangulation import triangulate

from conftest import LPOLY, SPIKE6, SQUARE


def tri_area_sum(P, result):
    t = result.triangles
    xs, ys = P.xs, P.ys
    areas = 0.5 * ((xs[t[:, 1]] - xs[t[:, 0]]) * (ys[t[:, 2]] - ys[t[:, 0]])
                   - (ys[t[:, 1]] - ys[t[:, 0]]) * (xs[t[:, 2]] - xs[t[:, 0]]))
    assert areas.min() > 0.0, "non-CCW triangle"
    return float(areas.sum())


def dual_is_tree(result):
    m = result.triangle_count()
    shared = set()
    for t in range(m):
        for e in range(3):
            o = int(result.neighbors[t, e])
            if o >= 0:
                shared.add((min(t, o), max(t, o)))
    if len(shared) != m - 1:
        return False
    # connectivity by BFS
    seen = {0}
    frontier = [0]
    while frontier:
        t = frontier.pop()
        for e in range(3):
            o = int(result.neighbors[t, e])
            if o >= 0 and o not in seen:
                seen.add(o)
                frontier.append(o)
    return len(seen) == m


def check(P, method="auto"):
    result = triangulate(P, method)
    assert result.triangle_count() == P.n - 2
    assert tri_area_sum(P, result) == pytest.approx(P.area, rel=1e-9)
    assert dual_is_tree(result)
    return result


class TestFixtures:
    def test_square(self, square):
        assert check(square).triangle_count() == 2

    def test_spike6(self, spike6):
        assert check(spike6).triangle_count() == 5

    def test_lpoly(self, lpoly):
        check(lpoly)

    def test_convex_fan(self):
        P = SimplePolygon([(5 * math.cos(2 * math.pi * k / 12),
                            5 * math.sin(2 * math.pi * k / 12))
                           for k in range(12)])
        check(P)

    def test_earclip_oracle_matches(self, spike6, lpoly):
        for P in (spike6, lpoly):
            fast = triangulate(P, "auto")
            slow = triangulate(P, "earclip")
            assert fast.triangle_count() == slow.triangle_count()
            assert tri_area_sum(P, fast) == pytest.approx(
                tri_area_sum(P, slow), rel=1e-12)

    def test_rectilinear_staircase_uses_sweep(self):
        # vertical and horizontal edges everywhere: sweep-order tie stress
        pts = [(0, 0), (5, 0)]
        for k in range(5, 0, -1):
            pts.append((k, 6 - k))
            pts.append((k - 1, 6 - k))
        P = SimplePolygon(pts)
        result = check(P)
        assert result.method == "monotone"

    def test_comb_teeth_uses_sweep(self):
        # many splits and merges in one sweep
        pts = [(0.0, 0.0), (12.0, 0.0), (12.0, 5.0)]
        for k in range(5, 0, -1):
            pts.append((2.0 * k - 0.5, 5.0))
            pts.append((2.0 * k - 0.5, 1.0))
            pts.append((2.0 * k - 1.5, 1.0))
            pts.append((2.0 * k - 1.5, 5.0))
        pts.append((0.0, 5.0))
        P = SimplePolygon(pts)
        result = check(P)
        assert result.method == "monotone"

    def test_triangle(self):
        P = SimplePolygon([(0, 0), (3, 0), (0, 3)])
        assert check(P).triangle_count() == 1


class TestLocate:
    def test_centroids_roundtrip(self, spike6):
        result = triangulate(spike6)
        for t in range(result.triangle_count()):
            tri = result.triangles[t]
            cx = float(spike6.xs[tri].mean())
            cy = float(spike6.ys[tri].mean())
            found = result.triangle_containing(cx, cy)
            ftri = result.triangles[found]
            # centroid must be inside the found triangle (ties possible on
            # shared edges, so membership rather than index equality)
            assert found >= 0
            xs, ys = spike6.xs, spike6.ys
            for e in range(3):
                a, b = ftri[e], ftri[(e + 1) % 3]
                cr = (xs[b] - xs[a]) * (cy - ys[a]) \
                    - (ys[b] - ys[a]) * (cx - xs[a])
                assert cr >= -1e-12

    def test_outside(self, square):
        result = triangulate(square)
        assert result.triangle_containing(9.0, 9.0) == -1


@st.composite
def star_polygon(draw):
    """Random star-shaped polygon: jittered radii around a circle."""
    n = draw(st.integers(5, 24))
    radii = draw(st.lists(st.floats(1.0, 5.0), min_size=n, max_size=n))
    pts = [(r * math.cos(2 * math.pi * k / n), r * math.sin(2 * math.pi * k / n))
           for k, r in enumerate(radii)]
    return pts


class TestRandomized:
    @given(star_polygon())
    @settings(max_examples=80, deadline=None)
    def test_star_polygons(self, pts):
        P = SimplePolygon(pts)
        fast = check(P)
        slow = triangulate(P, "earclip")
        assert tri_area_sum(P, fast) == pytest.approx(
            tri_area_sum(P, slow), rel=1e-9)
