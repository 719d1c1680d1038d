"""Geodesic shortest paths inside a simple polygon.

Shortest paths in a simple polygon are polygonal chains whose interior
vertices are reflex vertices of the boundary. The funnel technique over
a triangulation (Lee and Preparata, Networks 14, 1984; Guibas,
Hershberger, Leven, Sharir, Tarjan, Algorithmica 2, 1987) yields single
paths, the full shortest path tree, and the shortest path map.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateInput, PointOutsidePolygon, RayExitsImmediately
from .geom import Point2, dist
from .polygon import BoundaryPoint, Chord, Location, SimplePolygon
from .triangulation import Triangulation, triangulate

# parent marker for the tree root (the query point itself)
ROOT = -1


@dataclass(frozen=True)
class GeodesicPath:
    """Taut chain from source to target; interior vertices are reflex."""

    points: Tuple[Point2, ...]
    length: float


@dataclass(frozen=True)
class PrunedSpt:
    """Shortest path tree of a point, restricted to the reflex vertices.

    parent maps a node (vertex index) to its predecessor node, or ROOT
    when the geodesic reaches the source directly; dist holds geodesic
    distances from the source.
    """

    root: Point2
    nodes: Tuple[int, ...]
    parent: Dict[int, int]
    dist: Dict[int, float]

    def children(self) -> Dict[int, List[int]]:
        ch: Dict[int, List[int]] = {ROOT: []}
        for v in self.nodes:
            ch.setdefault(v, [])
        for v in self.nodes:
            ch[self.parent[v]].append(v)
        for lst in ch.values():
            lst.sort()
        return ch


@dataclass(frozen=True)
class SpmRegion:
    """One cell of the shortest path map.

    base_index is ROOT for the cell of directly visible points; every
    other cell is anchored at a reflex vertex and bounded by its window.
    """

    base_index: int
    base: Point2
    window: Optional[Chord]
    cell: SimplePolygon


# -- funnel machinery --------------------------------------------------------


def _tangent_index(F: List[int], t: int, c: Point2, coord) -> int:
    """Index of the funnel vertex where a taut path to c attaches.

    F lists vertex ids from one diagonal endpoint to the other with the
    apex at index t; the cycle F[0]..F[-1] plus the diagonal is CCW.
    c lies in the triangle glued onto the diagonal, which makes the
    blocking test monotone along each chain, so the first blocked vertex
    found scanning inward from either end is the tangent.
    """
    m = len(F) - 1
    cx, cy = c
    i = m
    j = 0
    while i > t or j < t:
        if i > t:
            ux, uy = coord(F[i])
            wx, wy = coord(F[i - 1])
            if (ux - wx) * (cy - uy) - (uy - wy) * (cx - ux) < 0.0:
                return i
            i -= 1
        if j < t:
            ux, uy = coord(F[j])
            wx, wy = coord(F[j + 1])
            if (ux - wx) * (cy - uy) - (uy - wy) * (cx - ux) > 0.0:
                return j
            j += 1
    return t


def _locate(P: SimplePolygon, T: Triangulation, q: Point2) -> int:
    eps = P.tol.eps_geom * max(P.diameter, 1.0)
    t = T.triangle_containing(q[0], q[1], eps)
    if t < 0:
        # points within tolerance of the boundary can slip between the
        # strict tests; retry with the coarser distance tolerance
        t = T.triangle_containing(q[0], q[1], P.tol.eps_dist * max(P.diameter, 1.0))
    return t


def _full_spt(P: SimplePolygon, p: Point2) -> Tuple[Triangulation, List[int], List[float]]:
    """Parent and distance arrays of the shortest path tree rooted at p."""
    T = triangulate(P)
    t0 = _locate(P, T, p)
    if t0 < 0:
        raise PointOutsidePolygon(f"tree root {p} lies outside the polygon")
    verts = P.vertices
    n = P.n
    parent = [-2] * n
    dd = [math.inf] * n
    tris = T.triangles
    nbr = T.neighbors

    def coord(i: int) -> Point2:
        return p if i == ROOT else verts[i]

    for v in tris[t0]:
        v = int(v)
        parent[v] = ROOT
        dd[v] = math.hypot(verts[v][0] - p[0], verts[v][1] - p[1])
    stack: List[Tuple[List[int], int, int]] = []
    for e in range(3):
        nb = int(nbr[t0][e])
        if nb >= 0:
            u = int(tris[t0][e])
            v = int(tris[t0][(e + 1) % 3])
            stack.append(([v, ROOT, u], 1, nb))
    while stack:
        F, t, tri = stack.pop()
        a = F[0]
        row = tris[tri]
        if int(row[0]) == a:
            e = 0
        elif int(row[1]) == a:
            e = 1
        else:
            e = 2
        c = int(row[(e + 2) % 3])
        cpt = verts[c]
        j = _tangent_index(F, t, cpt, coord)
        w = F[j]
        if parent[c] == -2:
            parent[c] = w
            wp = coord(w)
            base = 0.0 if w == ROOT else dd[w]
            dd[c] = base + math.hypot(cpt[0] - wp[0], cpt[1] - wp[1])
        nb1 = int(nbr[tri][(e + 2) % 3])
        if nb1 >= 0:
            stack.append((F[: j + 1] + [c], t if j >= t else j, nb1))
        nb2 = int(nbr[tri][(e + 1) % 3])
        if nb2 >= 0:
            stack.append(([c] + F[j:], 1 if j >= t else t - j + 1, nb2))
    return T, parent, dd


def pruned_spt(P: SimplePolygon, p: Point2) -> PrunedSpt:
    """Shortest path tree of p with all convex vertices removed.

    Convex vertices are always leaves of the full tree, so pruning keeps
    the parent structure of the reflex vertices intact.
    """
    p = (float(p[0]), float(p[1]))
    if P.contains(p) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"tree root {p} lies outside the polygon")
    _, parent, dd = _full_spt(P, p)
    reflex = P.reflex_mask()
    nodes = [i for i in range(P.n) if reflex[i]]
    par: Dict[int, int] = {}
    dmap: Dict[int, float] = {}
    for v in nodes:
        u = parent[v]
        while u != ROOT and not reflex[u]:
            u = parent[u]
        par[v] = u
        dmap[v] = dd[v]
    return PrunedSpt(root=p, nodes=tuple(nodes), parent=par, dist=dmap)


def geodesic(P: SimplePolygon, a: Point2, b: Point2) -> GeodesicPath:
    """Shortest path between two points of the closed polygon."""
    a = (float(a[0]), float(a[1]))
    b = (float(b[0]), float(b[1]))
    if P.contains(a) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"source {a} lies outside the polygon")
    if P.contains(b) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"target {b} lies outside the polygon")
    T = triangulate(P)
    ta = _locate(P, T, a)
    tb = _locate(P, T, b)
    if ta < 0 or tb < 0:
        raise PointOutsidePolygon("endpoint could not be located in the polygon")
    if ta == tb:
        return GeodesicPath((a, b), dist(a, b))

    # breadth-first corridor between the two triangles in the dual tree
    m = T.triangle_count()
    prev = np.full(m, -1, dtype=np.int64)
    prev_slot = np.full(m, -1, dtype=np.int64)
    seen = np.zeros(m, dtype=bool)
    seen[ta] = True
    dq = deque([ta])
    nbr = T.neighbors
    while dq:
        cur = dq.popleft()
        if cur == tb:
            break
        for e in range(3):
            nb = int(nbr[cur][e])
            if nb >= 0 and not seen[nb]:
                seen[nb] = True
                prev[nb] = cur
                prev_slot[nb] = e
                dq.append(nb)
    corridor: List[int] = []
    cur = tb
    while cur != ta:
        corridor.append(cur)
        cur = int(prev[cur])
    corridor.reverse()

    verts = P.vertices
    tris = T.triangles

    def coord(i: int) -> Point2:
        return a if i == ROOT else verts[i]

    first = corridor[0]
    e0 = int(prev_slot[first])
    u = int(tris[ta][e0])
    v = int(tris[ta][(e0 + 1) % 3])
    F: List[int] = [v, ROOT, u]
    t = 1
    parent: Dict[int, int] = {u: ROOT, v: ROOT}
    dd: Dict[int, float] = {ROOT: 0.0, u: dist(verts[u], a), v: dist(verts[v], a)}

    for k, tri in enumerate(corridor):
        row = tris[tri]
        aid = F[0]
        if int(row[0]) == aid:
            e = 0
        elif int(row[1]) == aid:
            e = 1
        else:
            e = 2
        c = int(row[(e + 2) % 3])
        cpt = verts[c]
        j = _tangent_index(F, t, cpt, coord)
        w = F[j]
        if c not in parent:
            parent[c] = w
            dd[c] = dd[w] + dist(cpt, coord(w))
        if k + 1 == len(corridor):
            jb = _tangent_index(F, t, b, coord)
            parent_b = F[jb]
        else:
            nxt = corridor[k + 1]
            slot = int(prev_slot[nxt])
            if int(tris[tri][slot]) == c:
                # leaving across (c, a-end): keep the a-side funnel
                F = F[: j + 1] + [c]
                t = t if j >= t else j
            else:
                F = [c] + F[j:]
                t = 1 if j >= t else t - j + 1
            continue

    chain: List[Point2] = [b]
    cur_id = parent_b
    length = dd[cur_id] + dist(b, coord(cur_id))
    while cur_id != ROOT:
        chain.append(verts[cur_id])
        cur_id = parent[cur_id]
    chain.append(a)
    chain.reverse()
    return GeodesicPath(tuple(chain), length)


# -- window rays over the triangulation --------------------------------------


def _vertex_fans(T: Triangulation) -> Dict[int, List[Tuple[int, int]]]:
    fans: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    tris = T.triangles
    for ti in range(T.triangle_count()):
        for k in range(3):
            fans[int(tris[ti][k])].append((ti, k))
    return fans


def _boundary_hit(P: SimplePolygon, T: Triangulation,
                  fans: Dict[int, List[Tuple[int, int]]],
                  v: int, d: Point2) -> BoundaryPoint:
    """Walk the triangulation from vertex v along direction d to the boundary.

    Total work is proportional to the number of triangles crossed, which
    keeps building many windows cheap. Falls back to the O(n) polygon
    ray on any numerically ambiguous step.
    """
    verts = P.vertices
    o = verts[v]
    n = P.n
    eps = P.tol.eps_geom * max(P.diameter, 1.0)
    tris = T.triangles
    nbr = T.neighbors
    start = None
    for ti, k in fans[v]:
        x = verts[int(tris[ti][(k + 1) % 3])]
        y = verts[int(tris[ti][(k + 2) % 3])]
        c1 = (x[0] - o[0]) * d[1] - (x[1] - o[1]) * d[0]
        c2 = d[0] * (y[1] - o[1]) - d[1] * (y[0] - o[0])
        if c1 >= -eps and c2 >= -eps:
            start = (ti, k)
            break
    if start is None:
        raise RayExitsImmediately(
            f"direction {d} leaves the polygon at vertex {v}")
    tri, k = start
    enter = None  # slot of the edge the ray entered through
    s_cur = 0.0
    for _ in range(4 * T.triangle_count() + 8):
        row = tris[tri]
        best = None
        corner_hit = None
        for e in range(3):
            if e == enter:
                continue
            i0 = int(row[e])
            i1 = int(row[(e + 1) % 3])
            px, py = verts[i0]
            qx, qy = verts[i1]
            wx, wy = qx - px, qy - py
            den = d[0] * wy - d[1] * wx
            if abs(den) <= 1e-300:
                continue
            s = ((px - o[0]) * wy - (py - o[1]) * wx) / den
            u2 = ((px - o[0]) * d[1] - (py - o[1]) * d[0]) / den
            if s <= s_cur - eps or u2 < -1e-9 or u2 > 1.0 + 1e-9:
                continue
            if u2 < 1e-9:
                corner_hit = i0
                continue
            if u2 > 1.0 - 1e-9:
                corner_hit = i1
                continue
            if best is None or s > best[0]:
                best = (s, e, i0, i1, u2)
        if best is None:
            if corner_hit is None:
                break
            # the ray runs exactly through a triangulation vertex; hop to
            # its fan and keep walking, or stop if it exits the polygon
            s_cur = max(s_cur, (verts[corner_hit][0] - o[0]) * d[0]
                        + (verts[corner_hit][1] - o[1]) * d[1])
            found = None
            for ti, kk in fans[corner_hit]:
                w0 = verts[corner_hit]
                x = verts[int(tris[ti][(kk + 1) % 3])]
                y = verts[int(tris[ti][(kk + 2) % 3])]
                c1 = (x[0] - w0[0]) * d[1] - (x[1] - w0[1]) * d[0]
                c2 = d[0] * (y[1] - w0[1]) - d[1] * (y[0] - w0[0])
                if c1 >= -eps and c2 >= -eps:
                    found = (ti, kk)
                    break
            if found is None:
                return P.vertex_boundary_point(corner_hit)
            tri, _ = found
            enter = None
            continue
        s, e, i0, i1, u2 = best
        nb = int(nbr[tri][e])
        if nb < 0:
            # boundary edges keep their polygon orientation and index
            return P.boundary_point(i0, min(max(u2, 0.0), 1.0))
        s_cur = s
        nrow = tris[nb]
        if int(nrow[0]) == i1:
            enter = 0
        elif int(nrow[1]) == i1:
            enter = 1
        else:
            enter = 2
        tri = nb
    # the walk gave up; the O(n) ray is authoritative
    return P.ray_shoot(o, d)


# -- shortest path map --------------------------------------------------------


def shortest_path_map(P: SimplePolygon, p: Point2) -> List[SpmRegion]:
    """Partition of the polygon by the last geodesic vertex before each point.

    The cell of the source contains the directly visible points; every
    other cell is anchored at a reflex vertex v and separated from its
    parent's cell by the window, the extension of the tree edge into v
    until it hits the boundary.
    """
    p = (float(p[0]), float(p[1]))
    if P.contains(p) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"source {p} lies outside the polygon")
    spt = pruned_spt(P, p)
    T = triangulate(P)
    fans = _vertex_fans(T)
    n = P.n
    verts = P.vertices
    eps_c = P.tol.eps_geom * max(P.diameter, 1.0)

    intervals: Dict[int, Tuple[float, float]] = {}
    endpoints: Dict[int, Tuple[Point2, Point2]] = {}
    chords: Dict[int, Chord] = {}
    empty: set = set()
    children = spt.children()
    for v in spt.nodes:
        u = spt.parent[v]
        upt = p if u == ROOT else verts[u]
        vpt = verts[v]
        dx, dy = vpt[0] - upt[0], vpt[1] - upt[1]
        norm = math.hypot(dx, dy)
        if norm <= P.tol.eps_geom:
            raise DegenerateInput("tree edge of zero length")
        d = (dx / norm, dy / norm)
        try:
            z = _boundary_hit(P, T, fans, v, d)
        except RayExitsImmediately:
            if children.get(v):
                raise DegenerateInput(
                    f"window of vertex {v} vanishes but the vertex has children")
            empty.add(v)
            continue
        side = d[0] * (verts[(v + 1) % n][1] - vpt[1]) \
            - d[1] * (verts[(v + 1) % n][0] - vpt[0])
        if abs(side) <= eps_c:
            side = d[0] * (verts[(v - 1) % n][1] - vpt[1]) \
                - d[1] * (verts[(v - 1) % n][0] - vpt[0])
        pos_v = float(v)
        pos_z = z.pos
        if abs((pos_z - pos_v) % n) <= 1e-12 or abs((pos_v - pos_z) % n) <= 1e-12:
            if children.get(v):
                raise DegenerateInput(
                    f"window of vertex {v} vanishes but the vertex has children")
            empty.add(v)
            continue
        if side > 0.0:
            intervals[v] = (pos_z, pos_v)
            endpoints[v] = (z.point, vpt)
        else:
            intervals[v] = (pos_v, pos_z)
            endpoints[v] = (vpt, z.point)
        chords[v] = P.chord(v, z)

    regions: List[SpmRegion] = []
    root_jumps = [c for c in children[ROOT] if c not in empty]
    ring = _walk_ring(P, None, [(intervals[c], endpoints[c]) for c in root_jumps])
    regions.append(SpmRegion(ROOT, p, None,
                             SimplePolygon(ring, tol=P.tol, _skip_checks=True)))
    for v in sorted(spt.nodes):
        if v in empty:
            continue
        kids = [c for c in children.get(v, []) if c not in empty]
        ring = _walk_ring(P, intervals[v],
                          [(intervals[c], endpoints[c]) for c in kids])
        regions.append(SpmRegion(v, verts[v], chords[v],
                                 SimplePolygon(ring, tol=P.tol, _skip_checks=True)))
    return regions


def _walk_ring(P: SimplePolygon,
               iv: Optional[Tuple[float, float]],
               jumps: List[Tuple[Tuple[float, float], Tuple[Point2, Point2]]]
               ) -> List[Point2]:
    """Boundary walk of one cell: follow the arc, hopping over child windows.

    iv is the CCW position interval of the cell's own pocket (None walks
    the whole boundary); each jump is a nested child interval whose two
    endpoints are bridged by the child's window.
    """
    n = P.n
    verts = P.vertices
    eps = P.tol.eps_geom * max(P.diameter, 1.0)
    ring: List[Point2] = []

    def push(pt: Point2) -> None:
        if ring:
            lx, ly = ring[-1]
            if abs(pt[0] - lx) <= eps and abs(pt[1] - ly) <= eps:
                return
        ring.append(pt)

    if iv is None:
        # start the full-boundary walk at a point no child interval can
        # straddle: the exit position of one of the children
        base = (jumps[0][0][1] % n) if jumps else 0.0
        span = float(n)
        closing = False
    else:
        base = iv[0] % n
        span = (iv[1] - iv[0]) % n
        if span == 0.0:
            span = float(n)
        closing = True

    stops = []
    for civ, pts in jumps:
        off_s = (civ[0] - base) % n
        off_e = off_s + (civ[1] - civ[0]) % n
        stops.append((off_s, off_e, pts))
    stops.sort(key=lambda s: s[0])

    if closing:
        push(_point_at(P, base))
    if iv is None and not jumps:
        vi = 0
        off = 0.0
    else:
        vi = (int(math.floor(base)) + 1) % n
        off = (vi - base) % n
    for off_s, off_e, (p_enter, p_exit) in stops:
        while off < off_s - 1e-12:
            push(verts[vi])
            vi = (vi + 1) % n
            off += 1.0
        push(p_enter)
        push(p_exit)
        while off < off_e + 1e-12:
            vi = (vi + 1) % n
            off += 1.0
    while off < span - 1e-12:
        push(verts[vi])
        vi = (vi + 1) % n
        off += 1.0
    if closing:
        push(_point_at(P, (base + span) % n))
    if len(ring) > 1:
        fx, fy = ring[0]
        lx, ly = ring[-1]
        if abs(fx - lx) <= eps and abs(fy - ly) <= eps:
            ring.pop()
    return ring


def _point_at(P: SimplePolygon, pos: float) -> Point2:
    n = P.n
    pos %= n
    e = int(math.floor(pos))
    t = pos - e
    a = P.vertices[e]
    b = P.vertices[(e + 1) % n]
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
