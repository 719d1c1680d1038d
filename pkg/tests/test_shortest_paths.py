"""Geodesics, pruned trees, and the shortest path map.

The funnel results are checked against a brute-force Dijkstra over the
visibility graph, which is slow but independent of the funnel code.
"""

import heapq
import math

import numpy as np
import pytest

from beaconlab import shortest_paths as sp
from beaconlab.errors import PointOutsidePolygon
from beaconlab.polygon import Location, SimplePolygon

from conftest import LPOLY, SPIKE6, assert_ring_equal, star_polygon

SQRT2 = math.sqrt(2.0)


def brute_length(P, a, b):
    """Dijkstra over the full visibility graph; O(n^3) but independent."""
    pts = [a] + list(P.vertices) + [b]
    m = len(pts)
    D = [math.inf] * m
    D[0] = 0.0
    pq = [(0.0, 0)]
    done = [False] * m
    while pq:
        d0, i = heapq.heappop(pq)
        if done[i]:
            continue
        done[i] = True
        if i == m - 1:
            return d0
        for j in range(m):
            if not done[j] and P.sees(pts[i], pts[j]):
                nd = d0 + math.hypot(pts[j][0] - pts[i][0],
                                     pts[j][1] - pts[i][1])
                if nd < D[j]:
                    D[j] = nd
                    heapq.heappush(pq, (nd, j))
    return D[m - 1]


def path_is_taut(P, path):
    for u, w in zip(path.points, path.points[1:]):
        assert P.sees(u, w)
    for q in path.points[1:-1]:
        idx = min(range(P.n),
                  key=lambda i: math.hypot(P.vertices[i][0] - q[0],
                                           P.vertices[i][1] - q[1]))
        assert math.hypot(P.vertices[idx][0] - q[0],
                          P.vertices[idx][1] - q[1]) < 1e-9
        assert P.is_reflex(idx)


class TestGeodesic:
    def test_square_direct(self, square):
        g = sp.geodesic(square, (1, 1), (3, 3))
        assert g.points == ((1.0, 1.0), (3.0, 3.0))
        assert g.length == pytest.approx(2 * SQRT2)

    def test_spike_bends_at_tip(self, spike6):
        g = sp.geodesic(spike6, (6, 1), (0.3, 4.5))
        assert len(g.points) == 3
        assert g.points[1] == (3.0, 3.0)
        want = math.hypot(3, 2) + math.hypot(2.7, 1.5)
        assert g.length == pytest.approx(want, rel=1e-12)

    def test_lpoly_bends_at_corner(self, lpoly):
        g = sp.geodesic(lpoly, (0.5, 1), (3, 3))
        assert len(g.points) == 3
        assert g.points[1] == (2.0, 2.0)

    def test_symmetry(self, spike6):
        a, b = (6.0, 1.0), (0.3, 4.5)
        g1 = sp.geodesic(spike6, a, b)
        g2 = sp.geodesic(spike6, b, a)
        assert g1.length == pytest.approx(g2.length, rel=1e-12)
        assert g1.points == tuple(reversed(g2.points))

    def test_outside_raises(self, square):
        with pytest.raises(PointOutsidePolygon):
            sp.geodesic(square, (-1, 0), (1, 1))
        with pytest.raises(PointOutsidePolygon):
            sp.geodesic(square, (1, 1), (5, 5))

    def test_taut_on_fixtures(self, spike6, lpoly):
        path_is_taut(spike6, sp.geodesic(spike6, (6, 1), (0.3, 4.5)))
        path_is_taut(lpoly, sp.geodesic(lpoly, (0.5, 1), (3, 3)))

    def test_against_brute_oracle(self):
        rng = np.random.default_rng(7)
        checked = 0
        for seed in range(40):
            P = star_polygon(seed, n_lo=6, n_hi=14)
            pts = []
            while len(pts) < 4:
                q = (rng.uniform(P.bbox[0], P.bbox[2]),
                     rng.uniform(P.bbox[1], P.bbox[3]))
                if P.contains(q) == Location.INTERIOR:
                    pts.append(q)
            for a, b in [(pts[0], pts[1]), (pts[2], pts[3])]:
                g = sp.geodesic(P, a, b)
                want = brute_length(P, a, b)
                assert g.length == pytest.approx(want, rel=1e-9, abs=1e-12)
                path_is_taut(P, g)
                checked += 1
        assert checked == 80

    def test_fixed_polygons_against_brute(self, spike6, lpoly):
        cases = [
            (spike6, (0.5, 0.5), (0.5, 5.0)),
            (spike6, (7.5, 5.5), (0.5, 2.1)),
            (spike6, (1.0, 3.9), (6.0, 1.0)),
            (lpoly, (0.5, 0.5), (3.9, 3.9)),
            (lpoly, (1.0, 1.9), (2.5, 3.5)),
        ]
        for P, a, b in cases:
            g = sp.geodesic(P, a, b)
            assert g.length == pytest.approx(brute_length(P, a, b), rel=1e-9)


class TestPrunedSpt:
    def test_convex_empty(self, square):
        t = sp.pruned_spt(square, (1, 1))
        assert t.nodes == ()

    def test_spike_single_node(self, spike6):
        for p, d in [((0.5, 0.5), 2.5 * SQRT2), ((6.0, 1.0), math.sqrt(13))]:
            t = sp.pruned_spt(spike6, p)
            assert t.nodes == (5,)
            assert t.parent[5] == sp.ROOT
            assert t.dist[5] == pytest.approx(d, rel=1e-12)

    def test_lpoly_single_node(self, lpoly):
        t = sp.pruned_spt(lpoly, (0.5, 1.0))
        assert t.nodes == (4,)
        assert t.parent[4] == sp.ROOT

    def test_distances_match_geodesics(self):
        for seed in range(25):
            P = star_polygon(seed + 100, n_lo=8, n_hi=18)
            p = (0.0, 0.0)
            t = sp.pruned_spt(P, p)
            for v in t.nodes:
                g = sp.geodesic(P, p, P.vertices[v])
                assert t.dist[v] == pytest.approx(g.length, rel=1e-9, abs=1e-12)
                u = t.parent[v]
                upt = p if u == sp.ROOT else P.vertices[u]
                base = 0.0 if u == sp.ROOT else t.dist[u]
                step = math.hypot(P.vertices[v][0] - upt[0],
                                  P.vertices[v][1] - upt[1])
                assert t.dist[v] == pytest.approx(base + step, rel=1e-9)

    def test_all_nodes_reflex(self):
        for seed in range(10):
            P = star_polygon(seed + 300, n_lo=8, n_hi=18)
            t = sp.pruned_spt(P, (0.0, 0.0))
            assert list(t.nodes) == P.reflex_vertices()


class TestSpm:
    def test_convex_single_region(self, square):
        regions = sp.shortest_path_map(square, (1, 1))
        assert len(regions) == 1
        r = regions[0]
        assert r.base_index == sp.ROOT
        assert r.window is None
        assert r.cell.area == pytest.approx(square.area)

    def test_spike_from_southwest(self, spike6):
        regions = sp.shortest_path_map(spike6, (0.5, 0.5))
        assert len(regions) == 2
        root, pocket = regions
        assert root.base_index == sp.ROOT
        assert pocket.base_index == 5
        assert pocket.base == (3.0, 3.0)
        w = pocket.window
        assert w.end.edge_index == 2
        assert w.end_point[0] == pytest.approx(6.0)
        assert w.end_point[1] == pytest.approx(6.0)
        assert_ring_equal(pocket.cell.vertices,
                          [(6, 6), (0, 6), (0, 4), (3, 3)])
        assert_ring_equal(root.cell.vertices,
                          [(0, 0), (8, 0), (8, 6), (6, 6), (3, 3), (0, 2)])
        assert root.cell.area + pocket.cell.area == pytest.approx(spike6.area)

    def test_spike_from_southeast(self, spike6):
        regions = sp.shortest_path_map(spike6, (6.0, 1.0))
        assert len(regions) == 2
        pocket = regions[1]
        w = pocket.window
        assert w.end.edge_index == 3
        assert w.end.t == pytest.approx(0.5)
        assert w.end_point == (0.0, 5.0)
        assert_ring_equal(pocket.cell.vertices, [(0, 5), (0, 4), (3, 3)])

    def test_lpoly_pocket(self, lpoly):
        regions = sp.shortest_path_map(lpoly, (1.0, 0.5))
        assert len(regions) == 2
        pocket = regions[1]
        assert pocket.base_index == 4
        assert_ring_equal(pocket.cell.vertices,
                          [(10.0 / 3.0, 4.0), (2.0, 4.0), (2.0, 2.0)],
                          tol=1e-9)
        assert regions[0].cell.area == pytest.approx(16 - 4 - 4.0 / 3.0)

    def test_windows_match_polygon_ray(self, spike6):
        regions = sp.shortest_path_map(spike6, (0.5, 0.5))
        w = regions[1].window
        d = (1.0 / SQRT2, 1.0 / SQRT2)
        z = spike6.ray_shoot((3.0, 3.0), d)
        assert z.edge_index == w.end.edge_index
        assert z.t == pytest.approx(w.end.t, abs=1e-12)

    def test_partition_and_base_property(self):
        rng = np.random.default_rng(12)
        for seed in range(12):
            P = star_polygon(seed + 500, n_lo=8, n_hi=16)
            p = (0.0, 0.0)
            regions = sp.shortest_path_map(P, p)
            total = sum(r.cell.area for r in regions)
            assert total == pytest.approx(P.area, rel=1e-9)
            for r in regions:
                hits = 0
                tries = 0
                while hits < 25 and tries < 4000:
                    tries += 1
                    bb = r.cell.bbox
                    q = (rng.uniform(bb[0], bb[2]), rng.uniform(bb[1], bb[3]))
                    if r.cell.contains(q) != Location.INTERIOR:
                        continue
                    if P.contains(q) != Location.INTERIOR:
                        continue
                    hits += 1
                    g = sp.geodesic(P, p, q)
                    if r.base_index == sp.ROOT:
                        assert len(g.points) == 2
                    else:
                        assert len(g.points) >= 3
                        last = g.points[-2]
                        assert math.hypot(last[0] - r.base[0],
                                          last[1] - r.base[1]) < 1e-9
                    inside = sum(1 for other in regions
                                 if other.cell.contains(q) == Location.INTERIOR)
                    assert inside == 1
                assert hits == 25

    def test_region_count_is_nodes_plus_root(self):
        for seed in range(8):
            P = star_polygon(seed + 900, n_lo=10, n_hi=18)
            t = sp.pruned_spt(P, (0.0, 0.0))
            regions = sp.shortest_path_map(P, (0.0, 0.0))
            assert len(regions) <= len(t.nodes) + 1
            assert regions[0].base_index == sp.ROOT
            bases = [r.base_index for r in regions[1:]]
            assert bases == sorted(bases)
