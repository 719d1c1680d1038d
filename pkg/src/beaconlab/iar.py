"""Inverse attraction regions from shortest-path-tree constraints.

The beacon positions able to attract a fixed target point p form a closed
region bounded by straight segments.  Its complement has a compact
description: every edge (u, v) of the pruned shortest path tree rooted at
p excludes the beacons behind at most two lines anchored at the reflex
vertex v, each restricted to the side of a polygon chord away from u.
Intersecting the complements of these half-planes inside every
shortest-path-map cell and gluing the clipped cells back together yields
the region exactly.  ``iar_naive`` does this cell by cell; ``iar_optimal``
shares the intersection work through a segment tree over the cells.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import (DegenerateOnBoundary, NotReflex, PointOutsidePolygon,
                     RayExitsImmediately)
from .geom import (HalfPlane, Point2, clip_convex, cross, dist, dot, lerp,
                   point_segment_distance, sub, unit)
from .polygon import Chord, Location, SimplePolygon, SubpolygonRef
from .shortest_paths import (ROOT, PrunedSpt, SpmRegion, pruned_spt,
                             shortest_path_map)

# Pieces whose area falls below this fraction of diameter^2 are clipping
# residue, well above float noise and well below any feature the geometric
# tolerance can resolve.
_AREA_REL = 1e-14

# Deterministic unit vector used when a degenerate configuration forces a
# retry with a nudged target point.
_NUDGE_DIR = (math.cos(1.0), math.sin(1.0))


class CaseTag(IntEnum):
    """Which construction produced a constraining half-plane."""

    CASE1_SIDE_A = 0
    CASE1_SIDE_B = 1
    CASE2 = 2


class Provenance(IntEnum):
    """Where a region vertex sits relative to the input polygon."""

    ON_POLYGON_BOUNDARY = 0
    INTERNAL = 1


@dataclass(frozen=True)
class ConstrainingHalfPlane:
    """One half-plane of excluded beacon positions, valid inside a domain.

    Beacons strictly inside ``plane`` that also lie in ``domain`` cannot
    attract the source point.  ``node`` is the reflex vertex whose tree
    edge from ``parent`` produced the constraint; for case 2 the plane is
    the deadwedge half-plane of ``seen_edge``.
    """

    node: int
    parent: Point2
    case_tag: CaseTag
    plane: HalfPlane
    domain: SubpolygonRef
    seen_edge: Optional[int] = None

    @property
    def chord(self) -> Chord:
        return self.domain.chord

    @property
    def effective_line(self) -> Tuple[Point2, Point2]:
        """(point, direction) of the boundary line of ``plane``."""
        return self.plane.boundary_point(), self.plane.boundary_direction()


@dataclass(frozen=True)
class FreeRegion:
    """Convex region of still-allowed beacon positions, clipped to a box."""

    ring: Tuple[Point2, ...]

    def clip(self, hp: HalfPlane) -> "FreeRegion":
        return FreeRegion(tuple(clip_convex(list(self.ring), hp)))

    @property
    def empty(self) -> bool:
        return len(self.ring) < 3


@dataclass(frozen=True)
class ComplexityStats:
    """Vertex counts of a region split by location."""

    group1: int
    group2: int
    per_edge_max: int


@dataclass(frozen=True)
class IarResult:
    """Inverse attraction region: components plus vertex bookkeeping."""

    components: Tuple[SimplePolygon, ...]
    provenance: Tuple[Tuple[Provenance, ...], ...]
    stats: ComplexityStats
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def area(self) -> float:
        return sum(c.area for c in self.components)

    def contains(self, q: Point2) -> bool:
        return any(c.contains(q) != Location.EXTERIOR for c in self.components)


def classify_case(P: SimplePolygon, u: Point2, v: int
                  ) -> Tuple[str, Optional[int]]:
    """Classify the tree edge (u, v) by where the parent u sits.

    Returns ``("case2", seen_edge)`` when u lies inside one of the two
    half-planes bounding deadwedge(v); the seen edge is the incident edge
    of v whose supporting line keeps u on its interior side.  Returns
    ``("case1", None)`` when u is inside neither.  Raises
    DegenerateOnBoundary when the classification is ambiguous within
    tolerance and NotReflex when v is not a reflex vertex.
    """
    n = P.n
    v %= n
    if not P.is_reflex(v):
        raise NotReflex(f"vertex {v} is not reflex")
    r = P.vertices[v]
    prev_pt = P.vertices[(v - 1) % n]
    next_pt = P.vertices[(v + 1) % n]
    eps = P.tol.eps_geom
    # value() <= 0 means inside; membership in the union is decided by the
    # half-plane u penetrates deepest
    h_prev = HalfPlane.toward(r, sub(prev_pt, r))
    h_next = HalfPlane.toward(r, sub(next_pt, r))
    m = min(h_prev.value(u), h_next.value(u))
    if abs(m) <= eps:
        raise DegenerateOnBoundary(
            f"parent {u} sits on a deadwedge boundary of vertex {v}")
    if m > 0.0:
        return "case1", None
    # seen edge: normalized leftness of u against each incident edge line;
    # a parent collinear with one edge (score ~0) sees along the other
    s_prev = cross(unit(sub(r, prev_pt)), sub(u, prev_pt))
    s_next = cross(unit(sub(next_pt, r)), sub(u, r))
    if max(s_prev, s_next) < -eps:
        raise DegenerateOnBoundary(
            f"parent {u} is exterior to both edge lines at vertex {v}")
    return "case2", (v - 1) % n if s_prev >= s_next else v


def constraining_halfplanes(P: SimplePolygon, u: Point2, v: int,
                            parent_vertex: Optional[int] = None
                            ) -> List[ConstrainingHalfPlane]:
    """Constraints contributed by the pruned-tree edge (u, v).

    Case 2 yields one constraint: the deadwedge half-plane of the seen
    edge, with the domain cut off by the ray extending that edge beyond v.
    Case 1 yields one constraint per side of the line through u and v,
    each cut by the perpendicular ray at v into that side and constraining
    the opposite side.  ``parent_vertex`` names u's vertex index when the
    parent is itself a polygon vertex, enabling exact containment tests.
    """
    n = P.n
    v %= n
    kind, seen = classify_case(P, u, v)
    r = P.vertices[v]
    out: List[ConstrainingHalfPlane] = []
    if kind == "case2":
        other = P.vertices[seen] if seen != v else P.vertices[(v + 1) % n]
        d_seen = unit(sub(other, r))
        plane = HalfPlane.toward(r, d_seen)
        hit = P.ray_shoot(r, (-d_seen[0], -d_seen[1]))
        chord = P.chord(v, hit)
        a, b = P.split(chord, validate=False)
        dom = _piece_avoiding(a, b, u, parent_vertex)
        out.append(ConstrainingHalfPlane(v, u, CaseTag.CASE2, plane, dom, seen))
        return out
    ldir = unit(sub(r, u))
    sides = ((CaseTag.CASE1_SIDE_A, (-ldir[1], ldir[0])),
             (CaseTag.CASE1_SIDE_B, (ldir[1], -ldir[0])))
    for tag, nrm in sides:
        try:
            hit = P.ray_shoot(r, nrm)
        except RayExitsImmediately:
            # cannot happen for a strictly classified parent; at the
            # tolerance margin the side constrains nothing
            continue
        chord = P.chord(v, hit)
        a, b = P.split(chord, validate=False)
        dom = _piece_avoiding(a, b, u, parent_vertex)
        plane = HalfPlane.toward(r, (-nrm[0], -nrm[1]))
        out.append(ConstrainingHalfPlane(v, u, tag, plane, dom, None))
    return out


def _piece_avoiding(a: SubpolygonRef, b: SubpolygonRef, u: Point2,
                    parent_vertex: Optional[int]) -> SubpolygonRef:
    """The split piece that does not contain the parent."""
    if parent_vertex is not None:
        in_a = a.contains_vertex(parent_vertex)
        in_b = b.contains_vertex(parent_vertex)
    else:
        in_a = a.contains_point(u) != Location.EXTERIOR
        in_b = b.contains_point(u) != Location.EXTERIOR
    if in_a and not in_b:
        return b
    if in_b and not in_a:
        return a
    raise DegenerateOnBoundary(f"parent {u} is not separated by the chord")


def attracts_by_theorem(P: SimplePolygon, p: Point2,
                        constraints: Sequence[ConstrainingHalfPlane],
                        b: Point2) -> bool:
    """Constraint-list membership test: can beacon b attract the point p?

    b attracts iff no constraining half-plane contains it strictly while
    its domain contains it; positions on an effective line itself still
    attract (the region is closed).  Raises PointOutsidePolygon when b
    lies outside the closed polygon.
    """
    bq = (float(b[0]), float(b[1]))
    if P.contains(bq) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"beacon {bq} lies outside the polygon")
    eps = P.tol.eps_geom
    for c in constraints:
        if c.plane.value(bq) < -eps \
                and c.domain.contains_point(bq) != Location.EXTERIOR:
            return False
    return True


def constraint_set(P: SimplePolygon, p: Point2) -> List[ConstrainingHalfPlane]:
    """All constraining half-planes induced by the pruned tree rooted at p."""
    _, _, cons, _ = _prepare(P, p)
    return cons


# -- pipeline ---------------------------------------------------------------


def _build(P: SimplePolygon, p: Point2
           ) -> Tuple[PrunedSpt, List[SpmRegion], List[ConstrainingHalfPlane]]:
    spt = pruned_spt(P, p)
    regions = shortest_path_map(P, p)
    cons: List[ConstrainingHalfPlane] = []
    for w in spt.nodes:
        par = spt.parent[w]
        if par == ROOT:
            cons.extend(constraining_halfplanes(P, p, w))
        else:
            cons.extend(constraining_halfplanes(P, P.vertices[par], w,
                                                parent_vertex=par))
    return spt, regions, cons


def _line_key(hp: HalfPlane) -> Tuple[int, int, int]:
    a, b, c = hp.a, hp.b, hp.c
    if a < 0.0 or (a == 0.0 and b < 0.0):
        a, b, c = -a, -b, -c
    return round(a * 1e9), round(b * 1e9), round(c * 1e9)


def _has_line_collision(cons: Sequence[ConstrainingHalfPlane]) -> bool:
    """True when constraints of two different tree edges share a boundary line."""
    seen: Dict[Tuple[int, int, int], int] = {}
    for c in cons:
        key = _line_key(c.plane)
        owner = seen.setdefault(key, c.node)
        if owner != c.node:
            return True
    return False


def _prepare(P: SimplePolygon, p: Point2
             ) -> Tuple[PrunedSpt, List[SpmRegion],
                        List[ConstrainingHalfPlane], Dict[str, Any]]:
    """Build tree, map and constraints, nudging p once if geometry degenerates."""
    pq = (float(p[0]), float(p[1]))
    if P.contains(pq) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"target {pq} lies outside the polygon")
    meta: Dict[str, Any] = {}
    q = pq
    for attempt in range(2):
        try:
            spt, regions, cons = _build(P, q)
        except DegenerateOnBoundary:
            if attempt:
                raise
        else:
            if attempt or not _has_line_collision(cons):
                return spt, regions, cons, meta
        step = 1e-7 * P.diameter
        nq = (pq[0] + step * _NUDGE_DIR[0], pq[1] + step * _NUDGE_DIR[1])
        if P.contains(nq) == Location.EXTERIOR:
            nq = (pq[0] - step * _NUDGE_DIR[0], pq[1] - step * _NUDGE_DIR[1])
        if P.contains(nq) == Location.EXTERIOR:
            nq = pq
        else:
            meta["perturbed_p"] = nq
        q = nq
    raise AssertionError("unreachable")


# -- assembly ---------------------------------------------------------------

# point origin tags, strongest first: polygon vertex, on a polygon edge,
# on a window chord, internal
_TAG_VERTEX = 0
_TAG_EDGE = 1
_TAG_WINDOW = 3
_TAG_INTERNAL = 2
_TAG_RANK = {_TAG_VERTEX: 0, _TAG_EDGE: 1, _TAG_WINDOW: 2, _TAG_INTERNAL: 3}


class _Welder:
    """Canonical integer ids for nearly identical points via a grid hash."""

    def __init__(self, eps: float):
        self.eps = max(eps, 1e-300)
        self.grid: Dict[Tuple[int, int], List[int]] = {}
        self.points: List[Point2] = []

    def id_for(self, q: Point2) -> Tuple[int, bool]:
        x, y = q
        eps = self.eps
        gx = math.floor(x / eps)
        gy = math.floor(y / eps)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self.grid.get((gx + dx, gy + dy), ()):
                    px, py = self.points[idx]
                    if abs(px - x) <= eps and abs(py - y) <= eps:
                        return idx, False
        idx = len(self.points)
        self.points.append(q)
        self.grid.setdefault((gx, gy), []).append(idx)
        return idx, True


class _Assembler:
    """Glues clipped cell pieces into region components.

    Points are welded to canonical ids and tagged with their origin, so
    shared piece edges cancel exactly.  Window chords remember the clip
    crossings that land on them: the piece on the unclipped side has its
    matching edge subdivided the same way, which removes T-junctions
    before cancellation.
    """

    def __init__(self, P: SimplePolygon):
        self.P = P
        self.eps_drop = _AREA_REL * P.diameter * P.diameter
        self.weld = _Welder(P.tol.eps_geom)
        self.tags: List[Tuple[int, int]] = []
        self.win_seg: List[Tuple[int, int]] = []
        self.win_pts: List[List[int]] = []
        self.win_of: Dict[int, List[int]] = {}
        self.pieces: List[List[int]] = []
        for i, q in enumerate(P.vertices):
            self.pid(q, (_TAG_VERTEX, i))

    def pid(self, q: Point2, tag: Optional[Tuple[int, int]] = None) -> int:
        idx, new = self.weld.id_for(q)
        if new:
            self.tags.append(tag if tag is not None else (_TAG_INTERNAL, -1))
        elif tag is not None \
                and _TAG_RANK[tag[0]] < _TAG_RANK[self.tags[idx][0]]:
            self.tags[idx] = tag
        return idx

    def point(self, idx: int) -> Point2:
        return self.weld.points[idx]

    def add_window(self, start_pt: Point2, end_bp) -> None:
        a = self.pid(start_pt)
        tag = (_TAG_VERTEX, end_bp.edge_index) if end_bp.is_vertex() \
            else (_TAG_EDGE, end_bp.edge_index)
        b = self.pid(end_bp.point, tag)
        wid = len(self.win_seg)
        self.win_seg.append((a, b))
        self.win_pts.append([])
        self.win_of.setdefault(a, []).append(wid)
        self.win_of.setdefault(b, []).append(wid)

    def _crossing(self, q: Point2, ia: int, ib: int) -> int:
        ta, tb = self.tags[ia], self.tags[ib]
        edges = _incident_edges(ta, self.P.n) & _incident_edges(tb, self.P.n)
        if edges:
            return self.pid(q, (_TAG_EDGE, min(edges)))
        shared = set(self.win_of.get(ia, ())) & set(self.win_of.get(ib, ()))
        if shared:
            wid = min(shared)
            idx = self.pid(q, (_TAG_WINDOW, wid))
            if idx not in self.win_seg[wid] and idx not in self.win_pts[wid]:
                self.win_pts[wid].append(idx)
                self.win_of.setdefault(idx, []).append(wid)
            return idx
        return self.pid(q)

    def clip(self, ring: List[int], hp: HalfPlane) -> List[int]:
        pts = [self.weld.points[i] for i in ring]
        vals = [hp.value(q) for q in pts]
        out: List[int] = []
        m = len(ring)
        for i in range(m):
            j = (i + 1) % m
            vi, vj = vals[i], vals[j]
            if vi <= 0.0:
                out.append(ring[i])
                if vj > 0.0 and vi < 0.0:
                    t = vi / (vi - vj)
                    out.append(self._crossing(lerp(pts[i], pts[j], t),
                                              ring[i], ring[j]))
            elif vj < 0.0:
                t = vi / (vi - vj)
                out.append(self._crossing(lerp(pts[i], pts[j], t),
                                          ring[i], ring[j]))
        return _dedup_ring(out)

    def _ring_ids(self, verts: Sequence[Point2]) -> List[int]:
        return _dedup_ring([self.pid(q) for q in verts])

    def add_wholesale(self, verts: Sequence[Point2]) -> None:
        ids = self._ring_ids(verts)
        if len(ids) >= 3:
            self.pieces.append(ids)

    def add_clipped(self, reg: SpmRegion, planes: Sequence[HalfPlane]) -> None:
        ids = self._ring_ids(reg.cell.vertices)
        if len(ids) < 3:
            return
        base = self.pid(reg.base)
        try:
            k = ids.index(base)
        except ValueError:
            raise AssertionError(f"cell base {reg.base} missing from its ring")
        rot = ids[k:] + ids[:k]
        comps = [hp.complement() for hp in planes]
        for j in range(1, len(rot) - 1):
            tri = [rot[0], rot[j], rot[j + 1]]
            if abs(self._area(tri)) <= self.eps_drop:
                continue
            for hp in comps:
                tri = self.clip(tri, hp)
                if not tri:
                    break
            if tri and abs(self._area(tri)) > self.eps_drop:
                self.pieces.append(tri)

    def _area(self, ring: Sequence[int]) -> float:
        pts = self.weld.points
        s = 0.0
        for i, a in enumerate(ring):
            b = ring[(i + 1) % len(ring)]
            s += pts[a][0] * pts[b][1] - pts[b][0] * pts[a][1]
        return 0.5 * s

    # -- final gluing --------------------------------------------------

    def _split_window_edges(self, ring: List[int]) -> List[int]:
        out: List[int] = []
        pts = self.weld.points
        for i, a in enumerate(ring):
            b = ring[(i + 1) % len(ring)]
            out.append(a)
            shared = set(self.win_of.get(a, ())) & set(self.win_of.get(b, ()))
            for wid in sorted(shared):
                inner = self.win_pts[wid]
                if not inner:
                    continue
                pa, pb = pts[a], pts[b]
                d = sub(pb, pa)
                lo, hi = 0.0, dot(d, d)
                between = [(dot(sub(pts[c], pa), d), c) for c in inner
                           if c != a and c != b]
                between = [(t, c) for t, c in between if lo < t < hi]
                between.sort()
                out.extend(c for _, c in between)
                break
        return out

    def finalize(self, meta: Dict[str, Any], n_constraints: int) -> IarResult:
        counts: Dict[Tuple[int, int], int] = {}
        for piece in self.pieces:
            ring = self._split_window_edges(piece)
            for i, a in enumerate(ring):
                b = ring[(i + 1) % len(ring)]
                if counts.get((b, a), 0) > 0:
                    counts[(b, a)] -= 1
                else:
                    counts[(a, b)] = counts.get((a, b), 0) + 1
        out_edges: Dict[int, List[int]] = {}
        for (a, b), cnt in counts.items():
            for _ in range(cnt):
                out_edges.setdefault(a, []).append(b)
        loops = self._trace_loops(out_edges)
        eps = self.P.tol.eps_geom
        comps: List[SimplePolygon] = []
        provs: List[Tuple[Provenance, ...]] = []
        holes = 0
        g1 = 0
        g2 = 0
        per_edge: Dict[int, int] = {}
        for loop in loops:
            ids = _simplify_ring(loop, self.weld.points, eps)
            if len(ids) < 3:
                continue
            if _ring_area(ids, self.weld.points) <= self.eps_drop:
                holes += 1
                continue
            k = min(range(len(ids)), key=lambda i: self.weld.points[ids[i]])
            ids = ids[k:] + ids[:k]
            ring = [self.weld.points[i] for i in ids]
            tags = [self.tags[i] for i in ids]
            prov = []
            for tag in tags:
                if tag[0] == _TAG_VERTEX:
                    prov.append(Provenance.ON_POLYGON_BOUNDARY)
                elif tag[0] == _TAG_EDGE:
                    prov.append(Provenance.ON_POLYGON_BOUNDARY)
                    g1 += 1
                    per_edge[tag[1]] = per_edge.get(tag[1], 0) + 1
                else:
                    prov.append(Provenance.INTERNAL)
                    g2 += 1
            comps.append(SimplePolygon(ring, tol=self.P.tol, _skip_checks=True))
            provs.append(tuple(prov))
        order = sorted(range(len(comps)), key=lambda i: comps[i].vertices[0])
        meta = dict(meta)
        meta["constraints"] = n_constraints
        if holes:
            meta["degenerate_loops"] = holes
        stats = ComplexityStats(g1, g2, max(per_edge.values(), default=0))
        return IarResult(tuple(comps[i] for i in order),
                         tuple(provs[i] for i in order), stats, meta)

    def _trace_loops(self, out_edges: Dict[int, List[int]]) -> List[List[int]]:
        pts = self.weld.points
        bound = 0
        for a in out_edges:
            out_edges[a].sort(key=lambda b: pts[b])
            bound += len(out_edges[a])
        loops: List[List[int]] = []
        for s in sorted(out_edges, key=lambda a: pts[a]):
            while out_edges.get(s):
                first = out_edges[s].pop(0)
                loop = [s]
                prev, cur = s, first
                for _ in range(bound + 1):
                    close = first if cur == s else None
                    nxt = self._pick(out_edges, prev, cur, close)
                    if nxt is None:
                        break
                    loop.append(cur)
                    prev, cur = cur, nxt
                loops.append(loop)
        return loops

    def _pick(self, out_edges: Dict[int, List[int]], prev: int, cur: int,
              close_target: Optional[int]) -> Optional[int]:
        """Angular successor of the edge (prev, cur): the outgoing edge with
        the smallest clockwise turn from the reversed incoming direction,
        which keeps the enclosed face on the left.  Returns None when
        closing the loop back through close_target wins instead."""
        cands = out_edges.get(cur) or []
        pts = self.weld.points
        pc = pts[cur]
        rev = math.atan2(pts[prev][1] - pc[1], pts[prev][0] - pc[0])
        tau = 2.0 * math.pi
        def turn(b: int) -> float:
            ang = math.atan2(pts[b][1] - pc[1], pts[b][0] - pc[0])
            d = (rev - ang) % tau
            # an exact backtrack only as a last resort
            return d if d > 1e-12 else tau
        best = None
        best_d = math.inf
        for i, b in enumerate(cands):
            d = turn(b)
            if d < best_d:
                best, best_d = i, d
        if close_target is not None and turn(close_target) <= best_d:
            return None
        if best is None:
            return None
        return cands.pop(best)


def _incident_edges(tag: Tuple[int, int], n: int) -> set:
    if tag[0] == _TAG_VERTEX:
        return {(tag[1] - 1) % n, tag[1]}
    if tag[0] == _TAG_EDGE:
        return {tag[1]}
    return set()


def _dedup_ring(ids: List[int]) -> List[int]:
    out: List[int] = []
    for i in ids:
        if not out or out[-1] != i:
            out.append(i)
    while len(out) >= 2 and out[0] == out[-1]:
        out.pop()
    return out if len(out) >= 3 else []


def _ring_area(ids: Sequence[int], pts: List[Point2]) -> float:
    s = 0.0
    for i, a in enumerate(ids):
        b = ids[(i + 1) % len(ids)]
        s += pts[a][0] * pts[b][1] - pts[b][0] * pts[a][1]
    return 0.5 * s


def _simplify_ring(ids: List[int], pts: List[Point2], eps: float) -> List[int]:
    """Drop vertices within eps of the line through their neighbours."""

    def removable(ia: int, ib: int, ic: int) -> bool:
        a, b, c = pts[ia], pts[ib], pts[ic]
        den = dist(a, c)
        if den <= eps:
            return True
        return abs(cross(sub(c, a), sub(b, a))) / den <= eps

    stack: List[int] = []
    for i in ids:
        stack.append(i)
        while len(stack) >= 3 and removable(stack[-3], stack[-2], stack[-1]):
            del stack[-2]
    changed = True
    while changed and len(stack) >= 4:
        changed = False
        if removable(stack[-2], stack[-1], stack[0]):
            stack.pop()
            changed = True
        if len(stack) >= 4 and removable(stack[-1], stack[0], stack[1]):
            del stack[0]
            changed = True
    return stack


def _register_windows(asm: _Assembler, regions: Sequence[SpmRegion]) -> None:
    for reg in regions:
        if reg.window is not None:
            asm.add_window(reg.window.start_point, reg.window.end)


# -- engines ----------------------------------------------------------------


def iar_naive(P: SimplePolygon, p: Point2) -> IarResult:
    """Assemble the inverse attraction region cell by cell.

    Each shortest-path-map cell is clipped against the intersection of the
    complements of every constraint whose domain contains the cell's base
    vertex (containment closed at chord endpoints); the visibility cell of
    p joins unclipped.  Quadratic; the reference engine.
    """
    spt, regions, cons, meta = _prepare(P, p)
    asm = _Assembler(P)
    _register_windows(asm, regions)
    asm.add_wholesale(regions[0].cell.vertices)
    for reg in regions[1:]:
        planes = [c.plane for c in cons
                  if c.domain.contains_vertex(reg.base_index)]
        if planes:
            asm.add_clipped(reg, planes)
        else:
            asm.add_wholesale(reg.cell.vertices)
    return asm.finalize(meta, len(cons))


def iar_optimal(P: SimplePolygon, p: Point2) -> IarResult:
    """Assemble the inverse attraction region via a segment tree of cells.

    Cells are ordered by base vertex; each constraint covers a cyclic
    interval of them and is inserted at the canonical nodes of a segment
    tree.  A depth-first pass keeps the running convex free region and
    prunes subtrees it empties, clipping each surviving leaf cell exactly
    as the naive engine would.
    """
    spt, regions, cons, meta = _prepare(P, p)
    asm = _Assembler(P)
    _register_windows(asm, regions)
    asm.add_wholesale(regions[0].cell.vertices)
    cells = regions[1:]
    if cells:
        bases = [reg.base_index for reg in cells]
        tree = _SegTree(len(cells))
        for ci, c in enumerate(cons):
            for lo, hi in _leaf_intervals(c.domain, bases, P.n):
                tree.insert(lo, hi, (ci, c.plane))
        pad = 1e-6 * P.diameter
        xmin, ymin, xmax, ymax = P.bbox
        box = FreeRegion(((xmin - pad, ymin - pad), (xmax + pad, ymin - pad),
                          (xmax + pad, ymax + pad), (xmin - pad, ymax + pad)))
        _descend(tree, 1, 0, tree.size - 1, box, [], cells, asm)
    return asm.finalize(meta, len(cons))


class _SegTree:
    """Half-planes attached to canonical cell intervals."""

    def __init__(self, n_leaves: int):
        size = 1
        while size < n_leaves:
            size *= 2
        self.size = size
        self.items: List[List[Tuple[int, HalfPlane]]] = \
            [[] for _ in range(2 * size)]

    def insert(self, lo: int, hi: int, item: Tuple[int, HalfPlane]) -> None:
        lo += self.size
        hi += self.size + 1
        while lo < hi:
            if lo & 1:
                self.items[lo].append(item)
                lo += 1
            if hi & 1:
                hi -= 1
                self.items[hi].append(item)
            lo >>= 1
            hi >>= 1


def _leaf_intervals(domain: SubpolygonRef, bases: List[int], n: int
                    ) -> Iterator[Tuple[int, int]]:
    """Index ranges of the sorted bases the domain arc contains."""
    i0, count, _ = domain.vertex_range()
    last = i0 + count - 1
    spans = [(i0, min(last, n - 1))]
    if last >= n:
        spans.append((0, last - n))
    for a, b in spans:
        lo = bisect_left(bases, a)
        hi = bisect_right(bases, b) - 1
        if lo <= hi:
            yield lo, hi


def _descend(tree: _SegTree, node: int, lo: int, hi: int, region: FreeRegion,
             acc: List[Tuple[int, HalfPlane]], cells: Sequence[SpmRegion],
             asm: _Assembler) -> None:
    if lo >= len(cells):
        return
    items = tree.items[node]
    if items:
        for _, hp in items:
            region = region.clip(hp.complement())
        if region.empty:
            # no beacon position below this node remains free
            return
        acc.extend(items)
    if lo == hi:
        if acc:
            ordered = sorted(acc, key=lambda t: t[0])
            asm.add_clipped(cells[lo], [hp for _, hp in ordered])
        else:
            asm.add_wholesale(cells[lo].cell.vertices)
    else:
        mid = (lo + hi) // 2
        _descend(tree, 2 * node, lo, mid, region, acc, cells, asm)
        _descend(tree, 2 * node + 1, mid + 1, hi, region, acc, cells, asm)
    if items:
        del acc[-len(items):]


def complexity_stats(result: IarResult, P: SimplePolygon) -> ComplexityStats:
    """Recount region vertices against the polygon by direct geometry.

    Independent of the bookkeeping the engines carry; quadratic in the
    vertex counts, intended for cross-checking small and medium instances.
    """
    eps = 4.0 * P.tol.eps_geom
    g1 = 0
    g2 = 0
    per_edge: Dict[int, int] = {}
    for comp in result.components:
        for q in comp.vertices:
            if any(dist(q, w) <= eps for w in P.vertices):
                continue
            d, e = min((point_segment_distance(q, *P.edge(i)), i)
                       for i in range(P.n))
            if d <= eps:
                g1 += 1
                per_edge[e] = per_edge.get(e, 0) + 1
            else:
                g2 += 1
    return ComplexityStats(g1, g2, max(per_edge.values(), default=0))
