"""Simple polygons and their boundary operations.

A SimplePolygon stores a CCW vertex ring with no duplicate vertices and no
crossing edges. Boundary positions are addressed as (edge_index, t) pairs
with t in [0, 1); t = 0 is the edge's start vertex, which makes positions
canonically comparable along the boundary walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .errors import (
    ChordExitsPolygon,
    DegenerateInput,
    DuplicateVertex,
    NotReflex,
    PointOutsidePolygon,
    RayExitsImmediately,
    SelfIntersecting,
    TooFewVertices,
)
from .geom import (
    HalfPlane,
    Point2,
    Tolerance,
    Wedge,
    cross,
    dist,
    dot,
    lerp,
    sub,
    unit,
)


class Location(IntEnum):
    EXTERIOR = -1
    BOUNDARY = 0
    INTERIOR = 1


@dataclass(frozen=True)
class BoundaryPoint:
    """A point on the polygon boundary: position t in [0, 1) along an edge."""

    edge_index: int
    t: float
    point: Point2

    @property
    def pos(self) -> float:
        """Scalar position along the boundary walk, in [0, n)."""
        return self.edge_index + self.t

    def is_vertex(self) -> bool:
        return self.t == 0.0


@dataclass(frozen=True)
class Chord:
    """A segment between two boundary points whose interior lies in the polygon.

    start is a vertex index or a BoundaryPoint; end is always a BoundaryPoint.
    """

    start: Union[int, "BoundaryPoint"]
    end: BoundaryPoint
    start_point: Point2

    @property
    def end_point(self) -> Point2:
        return self.end.point


class SimplePolygon:
    """Immutable simple polygon with CCW orientation."""

    __slots__ = ("vertices", "n", "xs", "ys", "bbox", "diameter", "tol",
                 "area", "_reflex", "_scale", "_tri_cache")

    def __init__(self, vertices: Sequence[Point2], tol: Optional[Tolerance] = None,
                 _skip_checks: bool = False):
        verts = [(float(x), float(y)) for x, y in vertices]
        n = len(verts)
        if n < 3:
            raise TooFewVertices(f"{n} vertices")
        xs = np.array([v[0] for v in verts], dtype=np.float64)
        ys = np.array([v[1] for v in verts], dtype=np.float64)
        if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
            raise DegenerateInput("non-finite vertex coordinate")
        bbox = (float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max()))
        diameter = math.hypot(bbox[2] - bbox[0], bbox[3] - bbox[1])
        if diameter == 0.0:
            raise DegenerateInput("all vertices coincide")
        if tol is None:
            tol = Tolerance.for_diameter(diameter)
        area2 = kernels.signed_area(xs, ys)
        if area2 < 0.0:
            verts.reverse()
            xs = xs[::-1].copy()
            ys = ys[::-1].copy()
            area2 = -area2
        self.vertices: List[Point2] = verts
        self.n = n
        self.xs = xs
        self.ys = ys
        self.bbox = bbox
        self.diameter = diameter
        self.tol = tol
        self.area = 0.5 * area2
        self._reflex = None
        self._scale = max(abs(bbox[0]), abs(bbox[1]), abs(bbox[2]), abs(bbox[3]), 1e-300)
        self._tri_cache = None
        if not _skip_checks:
            _check_duplicates(self)
            _check_simplicity(self)
            if area2 <= tol.eps_geom * diameter:
                raise DegenerateInput("polygon area is zero within tolerance")

    # -- basic accessors ---------------------------------------------------

    def vertex(self, i: int) -> Point2:
        return self.vertices[i % self.n]

    def edge(self, i: int) -> Tuple[Point2, Point2]:
        i %= self.n
        return self.vertices[i], self.vertices[(i + 1) % self.n]

    def edge_length(self, i: int) -> float:
        a, b = self.edge(i)
        return dist(a, b)

    def boundary_point(self, edge_index: int, t: float) -> BoundaryPoint:
        """Canonical boundary point; t snaps to the nearest vertex within tolerance."""
        n = self.n
        edge_index %= n
        a, b = self.edge(edge_index)
        L = dist(a, b)
        eps_t = self.tol.eps_geom / max(L, 1e-300)
        if t <= eps_t:
            return BoundaryPoint(edge_index, 0.0, a)
        if t >= 1.0 - eps_t:
            return BoundaryPoint((edge_index + 1) % n, 0.0, b)
        return BoundaryPoint(edge_index, float(t), lerp(a, b, t))

    def vertex_boundary_point(self, i: int) -> BoundaryPoint:
        i %= self.n
        return BoundaryPoint(i, 0.0, self.vertices[i])

    # -- predicates --------------------------------------------------------

    def contains(self, q: Point2) -> Location:
        code = kernels.point_locate(self.xs, self.ys, q[0], q[1], self.tol.eps_geom)
        return Location(code)

    def is_reflex(self, i: int) -> bool:
        return bool(self.reflex_mask()[i % self.n])

    def reflex_mask(self) -> np.ndarray:
        if self._reflex is None:
            xs, ys = self.xs, self.ys
            ax = xs - np.roll(xs, 1)
            ay = ys - np.roll(ys, 1)
            bx = np.roll(xs, -1) - xs
            by = np.roll(ys, -1) - ys
            crossv = ax * by - ay * bx
            self._reflex = crossv < -self.tol.eps_geom * self._scale
        return self._reflex

    def reflex_vertices(self) -> List[int]:
        return [int(i) for i in np.nonzero(self.reflex_mask())[0]]

    def deadwedge(self, i: int) -> Wedge:
        """Wedge of beacon positions for which vertex i splits trajectories.

        Bounded by the lines through vertex i orthogonal to its incident
        edges, each half-plane containing the respective edge.
        """
        i %= self.n
        if not self.is_reflex(i):
            raise NotReflex(f"vertex {i} is not reflex")
        r = self.vertices[i]
        d_prev = unit(sub(self.vertices[(i - 1) % self.n], r))
        d_next = unit(sub(self.vertices[(i + 1) % self.n], r))
        return Wedge(r, HalfPlane.toward(r, d_prev), HalfPlane.toward(r, d_next))

    # -- ray shooting ------------------------------------------------------

    def ray_shoot(self, origin: Point2, direction: Point2) -> BoundaryPoint:
        """First boundary point hit by the ray from origin along direction.

        The origin must lie in the closed polygon. From a boundary origin
        the ray must enter the interior immediately, otherwise
        RayExitsImmediately is raised. Grazing contacts along the way (a
        vertex touch or a collinear stretch that does not leave the
        polygon) are passed through.
        """
        d = unit(direction)
        loc = self.contains(origin)
        if loc == Location.EXTERIOR:
            raise PointOutsidePolygon(f"ray origin {origin}")
        if loc == Location.BOUNDARY:
            probe = self._probe_point(origin, d, None)
            if self.contains(probe) != Location.INTERIOR:
                raise RayExitsImmediately(f"from {origin} along {d}")
        hit = self._first_exit(origin, d)
        if hit is None:
            raise DegenerateInput("ray found no boundary exit")
        return hit

    def _probe_point(self, origin: Point2, d: Point2, limit: Optional[float]) -> Point2:
        # probe must clear the boundary-snap tolerance yet stay below
        # feature size; the geometric mean of eps and diameter does both
        step = math.sqrt(self.tol.eps_geom * self.diameter)
        if limit is not None:
            step = min(step, limit)
        return (origin[0] + step * d[0], origin[1] + step * d[1])

    def _ray_candidates(self, origin: Point2, d: Point2,
                        s_min: float) -> List[Tuple[float, int, float]]:
        """(s, edge, t) candidates along the unit-direction ray, s > s_min."""
        eps = self.tol.eps_geom
        s_arr, t_arr = kernels.ray_edge_hits(self.xs, self.ys, origin[0], origin[1],
                                             d[0], d[1])
        ex = np.roll(self.xs, -1) - self.xs
        ey = np.roll(self.ys, -1) - self.ys
        lengths = np.hypot(ex, ey)
        eps_t = eps / np.maximum(lengths, 1e-300)
        ok = np.isfinite(s_arr) & (s_arr > s_min) & \
            (t_arr >= -eps_t) & (t_arr <= 1.0 + eps_t)
        out = [(float(s_arr[i]), int(i), float(min(max(t_arr[i], 0.0), 1.0)))
               for i in np.nonzero(ok)[0]]
        # collinear edges: endpoints become candidates where boundary may turn
        par = ~np.isfinite(s_arr)
        if par.any():
            for i in np.nonzero(par)[0]:
                a = self.vertices[i]
                b = self.vertices[(int(i) + 1) % self.n]
                if abs(cross(d, sub(a, origin))) <= eps and \
                   abs(cross(d, sub(b, origin))) <= eps:
                    for t_end, q in ((0.0, a), (1.0, b)):
                        s = dot(sub(q, origin), d)
                        if s > s_min:
                            out.append((s, int(i), t_end))
        out.sort()
        return out

    def _first_exit(self, origin: Point2, d: Point2,
                    max_s: Optional[float] = None) -> Optional[BoundaryPoint]:
        """First point where the ray leaves the closed polygon.

        Returns None when the exit lies beyond max_s. Grazing contacts are
        passed through via an exterior probe just beyond each candidate
        cluster.
        """
        eps = self.tol.eps_geom
        cands = self._ray_candidates(origin, d, 2.0 * eps)
        if max_s is not None:
            cands = [c for c in cands if c[0] <= max_s + eps]
        i = 0
        m = len(cands)
        while i < m:
            j = i + 1
            while j < m and cands[j][0] - cands[j - 1][0] <= 4.0 * eps:
                j += 1
            s_rep, edge, t = cands[i]
            # clean transversal crossing strictly inside an edge must exit
            a, b = self.edge(edge)
            L = max(dist(a, b), 1e-300)
            eps_t = eps / L
            clean = (j == i + 1) and (eps_t < t < 1.0 - eps_t)
            if clean:
                return self.boundary_point(edge, t)
            limit = (cands[j][0] - s_rep) / 2.0 if j < m else None
            probe = self._probe_point((origin[0] + s_rep * d[0],
                                       origin[1] + s_rep * d[1]), d, limit)
            if self.contains(probe) == Location.EXTERIOR:
                # exit here; prefer a vertex representation when one is near
                best = None
                for s_c, e_c, t_c in cands[i:j]:
                    bp = self.boundary_point(e_c, t_c)
                    if bp.is_vertex():
                        best = bp
                        break
                    if best is None:
                        best = bp
                return best
            i = j
        return None

    # -- visibility ---------------------------------------------------------

    def sees(self, a: Point2, b: Point2) -> bool:
        """True when the closed segment ab stays inside the closed polygon."""
        eps = self.tol.eps_geom
        if self.contains(a) == Location.EXTERIOR or \
           self.contains(b) == Location.EXTERIOR:
            return False
        L = dist(a, b)
        if L <= self.tol.eps_dist:
            return True
        d = ((b[0] - a[0]) / L, (b[1] - a[1]) / L)
        params = [0.0, L]
        for s, _, _ in self._ray_candidates(a, d, eps):
            if s < L - eps:
                params.append(s)
        params.sort()
        for u, v in zip(params, params[1:]):
            if v - u <= 4.0 * eps:
                continue
            mid = 0.5 * (u + v)
            q = (a[0] + mid * d[0], a[1] + mid * d[1])
            if self.contains(q) == Location.EXTERIOR:
                return False
        return True

    # -- chords and splitting ------------------------------------------------

    def chord(self, start: Union[int, BoundaryPoint], end: BoundaryPoint) -> Chord:
        sp = self.vertices[start % self.n] if isinstance(start, int) else start.point
        return Chord(start if not isinstance(start, int) else start % self.n,
                     end, sp)

    def chord_positions(self, chord: Chord) -> Tuple[float, float]:
        if isinstance(chord.start, int):
            s_pos = float(chord.start)
        else:
            s_pos = chord.start.pos
        return s_pos, chord.end.pos

    def split(self, chord: Chord, validate: bool = True
              ) -> Tuple["SubpolygonRef", "SubpolygonRef"]:
        """The two boundary pieces on either side of a chord.

        Returns (A, B): A walks the boundary from the chord's end forward
        (CCW) to its start, B the complementary arc. Raises
        ChordExitsPolygon when the chord leaves the closed polygon.
        """
        if validate and not self.sees(chord.start_point, chord.end_point):
            raise ChordExitsPolygon(f"{chord.start_point} -> {chord.end_point}")
        s_bp = chord.start if isinstance(chord.start, BoundaryPoint) \
            else self.vertex_boundary_point(chord.start)
        a = SubpolygonRef(self, chord, chord.end, s_bp)
        b = SubpolygonRef(self, chord, s_bp, chord.end)
        return a, b


class SubpolygonRef:
    """A polygon piece bounded by a boundary arc plus the cutting chord.

    Stores only the arc endpoints; vertex membership is O(1) and the full
    ring is materialized on demand.
    """

    __slots__ = ("polygon", "chord", "arc_from", "arc_to", "_ring")

    def __init__(self, polygon: SimplePolygon, chord: Chord,
                 arc_from: BoundaryPoint, arc_to: BoundaryPoint):
        self.polygon = polygon
        self.chord = chord
        self.arc_from = arc_from
        self.arc_to = arc_to
        self._ring = None

    def vertex_range(self) -> Tuple[int, int, int]:
        """(first, count, n): arc vertices are first, first+1, ... mod n."""
        n = self.polygon.n
        f = self.arc_from
        t = self.arc_to
        i0 = f.edge_index if f.t == 0.0 else (f.edge_index + 1) % n
        i1 = t.edge_index
        if f.t == 0.0 and t.t == 0.0 and i0 == i1:
            # chord between a vertex and itself is degenerate
            raise DegenerateInput("empty chord")
        count = (i1 - i0) % n + 1
        # an arc inside a single edge covers no vertices
        if f.t > 0.0 and f.edge_index == t.edge_index and t.t >= f.t:
            count = 0
        return i0, count, n

    def contains_vertex(self, i: int) -> bool:
        i0, count, n = self.vertex_range()
        return (i - i0) % n < count

    def boundary_vertices(self) -> List[int]:
        i0, count, n = self.vertex_range()
        return [(i0 + k) % n for k in range(count)]

    def ring(self) -> List[Point2]:
        """CCW vertex ring of the piece (arc points plus chord closure)."""
        if self._ring is None:
            pts: List[Point2] = []
            if self.arc_from.t > 0.0:
                pts.append(self.arc_from.point)
            pts.extend(self.polygon.vertices[i] for i in self.boundary_vertices())
            if self.arc_to.t > 0.0:
                pts.append(self.arc_to.point)
            eps = self.polygon.tol.eps_geom
            dedup = [pts[0]]
            for q in pts[1:]:
                if dist(q, dedup[-1]) > eps:
                    dedup.append(q)
            if len(dedup) >= 2 and dist(dedup[0], dedup[-1]) <= eps:
                dedup.pop()
            self._ring = dedup
        return self._ring

    def materialize(self) -> SimplePolygon:
        return SimplePolygon(self.ring(), tol=self.polygon.tol)

    def contains_point(self, q: Point2) -> Location:
        ring = self.ring()
        xs = np.array([p[0] for p in ring])
        ys = np.array([p[1] for p in ring])
        return Location(kernels.point_locate(xs, ys, q[0], q[1],
                                             self.polygon.tol.eps_geom))


def validate(vertices: Sequence[Point2], tol: Optional[Tolerance] = None
             ) -> SimplePolygon:
    """Construct a SimplePolygon, accepting CW input by reversing it."""
    return SimplePolygon(vertices, tol=tol)


def _check_duplicates(P: SimplePolygon) -> None:
    eps = P.tol.eps_geom
    q = max(eps * 2.0, 1e-300)
    seen = {}
    for i, (x, y) in enumerate(P.vertices):
        key = (round(x / q), round(y / q))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                j = seen.get((key[0] + dx, key[1] + dy))
                if j is not None and dist(P.vertices[j], (x, y)) <= eps:
                    raise DuplicateVertex(f"vertices {j} and {i}")
        seen[key] = i


def _check_simplicity(P: SimplePolygon) -> None:
    """Reject any contact between non-adjacent edges.

    Edges are swept by bbox x-interval; candidate pairs are filtered by
    y-overlap before the exact test.
    """
    n = P.n
    xs, ys = P.xs, P.ys
    x2 = np.roll(xs, -1)
    y2 = np.roll(ys, -1)
    exmin = np.minimum(xs, x2)
    exmax = np.maximum(xs, x2)
    eymin = np.minimum(ys, y2)
    eymax = np.maximum(ys, y2)
    eps = P.tol.eps_geom
    order = np.argsort(exmin, kind="stable")
    sxmin = exmin[order]
    for a in range(n):
        i = int(order[a])
        hi = int(np.searchsorted(sxmin, exmax[i] + eps, side="right"))
        if hi <= a + 1:
            continue
        js = order[a + 1:hi]
        mask = (eymin[js] <= eymax[i] + eps) & (eymax[js] >= eymin[i] - eps)
        for j in js[mask]:
            j = int(j)
            if j == (i + 1) % n or i == (j + 1) % n:
                _check_adjacent(P, i, j, eps)
                continue
            if _segments_touch(P.vertices[i], P.vertices[(i + 1) % n],
                               P.vertices[j], P.vertices[(j + 1) % n], eps):
                raise SelfIntersecting(f"edges {i} and {j}", edges=(i, j))


def _check_adjacent(P: SimplePolygon, i: int, j: int, eps: float) -> None:
    # adjacent edges may only share their common endpoint; a collinear
    # fold-back (zero interior angle) makes them overlap
    n = P.n
    if j == (i + 1) % n:
        shared = P.vertices[j]
        a_far = P.vertices[i]
        b_far = P.vertices[(j + 1) % n]
    else:
        shared = P.vertices[i]
        a_far = P.vertices[j]
        b_far = P.vertices[(i + 1) % n]
    u = sub(a_far, shared)
    v = sub(b_far, shared)
    if abs(cross(u, v)) <= eps * max(dist(a_far, shared), dist(b_far, shared)) \
            and dot(u, v) > 0.0:
        raise SelfIntersecting(f"edges {i} and {j} fold back", edges=(i, j))


def _segments_touch(p1: Point2, q1: Point2, p2: Point2, q2: Point2,
                    eps: float) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        scale = max(abs(b[0] - a[0]), abs(b[1] - a[1]),
                    abs(c[0] - a[0]), abs(c[1] - a[1]), 1e-300)
        if abs(v) <= eps * scale:
            return 0
        return 1 if v > 0 else -1

    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True

    def on_seg(a, b, c):
        return min(a[0], b[0]) - eps <= c[0] <= max(a[0], b[0]) + eps and \
            min(a[1], b[1]) - eps <= c[1] <= max(a[1], b[1]) + eps

    if o1 == 0 and on_seg(p1, q1, p2):
        return True
    if o2 == 0 and on_seg(p1, q1, q2):
        return True
    if o3 == 0 and on_seg(p2, q2, p1):
        return True
    if o4 == 0 and on_seg(p2, q2, q1):
        return True
    return False
