"""Greedy beacon attraction: event-driven pull and slide simulation.

The motion model follows the beacon routing of Biro, Iwerks, Kostitsyna,
and Mitchell (2013): a point moves straight toward the beacon while the
interior permits, slides along a blocking edge toward the orthogonal
projection of the beacon on that edge's line, and halts at a dead point
when no feasible motion decreases its distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, List, Optional, Tuple, Union

from . import kernels, shortest_paths
from .errors import (BudgetExceeded, PointOutsidePolygon,
                     RayExitsImmediately)
from .geom import (Point2, cross, dist, dot, lerp, orthogonal_projection,
                   point_segment_distance, sub, unit)
from .polygon import Chord, Location, SimplePolygon

__all__ = [
    "MoveKind", "TrajectoryEdge", "Trajectory", "ReachedBeacon", "DeadPoint",
    "SampleGrid", "simulate", "attracts", "split_edge",
    "sample_inverse_attraction", "InvariantChecker",
]


class MoveKind(IntEnum):
    PULL = 0
    SLIDE = 1


@dataclass(frozen=True)
class TrajectoryEdge:
    """One event-to-event move; slides carry their polygon edge index."""
    kind: MoveKind
    src: Point2
    dst: Point2
    edge_index: Optional[int] = None

    @property
    def vector(self) -> Point2:
        return (self.dst[0] - self.src[0], self.dst[1] - self.src[1])


@dataclass(frozen=True)
class ReachedBeacon:
    pass


@dataclass(frozen=True)
class DeadPoint:
    point: Point2


@dataclass(frozen=True)
class Trajectory:
    start: Point2
    beacon: Point2
    edges: Tuple[TrajectoryEdge, ...]
    outcome: Union[ReachedBeacon, DeadPoint]

    @property
    def reached(self) -> bool:
        return isinstance(self.outcome, ReachedBeacon)

    @property
    def terminal(self) -> Point2:
        return self.edges[-1].dst if self.edges else self.start

    def event_points(self) -> List[Point2]:
        return [self.start] + [e.dst for e in self.edges]


# -- local feasibility predicates -------------------------------------------

def _cone_feasible(P: SimplePolygon, i: int, d: Point2) -> bool:
    """Closed test: does direction d from vertex i enter the polygon?"""
    n = P.n
    v = P.vertices[i]
    du = unit(d)
    en = unit(sub(P.vertices[(i + 1) % n], v))
    ep = unit(sub(P.vertices[(i - 1) % n], v))
    eps = P.tol.eps_geom / max(P.diameter, 1e-300)
    ok_next = cross(en, du) >= -eps
    ok_prev = cross(du, ep) >= -eps
    if P.is_reflex(i):
        return ok_next or ok_prev
    return ok_next and ok_prev


def _slide_rates(P: SimplePolygon, i: int, d: Point2) -> Tuple[float, float]:
    """Distance-decrease rates when leaving vertex i along its two edges."""
    n = P.n
    v = P.vertices[i]
    r_prev = dot(unit(sub(P.vertices[(i - 1) % n], v)), d)
    r_next = dot(unit(sub(P.vertices[(i + 1) % n], v)), d)
    return r_prev, r_next


def _edge_param(a: Point2, b: Point2, q: Point2) -> float:
    ex, ey = b[0] - a[0], b[1] - a[1]
    return ((q[0] - a[0]) * ex + (q[1] - a[1]) * ey) / (ex * ex + ey * ey)


def _nearest_edge(P: SimplePolygon, q: Point2) -> Tuple[int, float]:
    best_k, best_d = 0, math.inf
    for k in range(P.n):
        a, b = P.edge(k)
        dd = point_segment_distance(q, a, b)
        if dd < best_d:
            best_k, best_d = k, dd
    return best_k, best_d


_FREE, _EDGE, _VERTEX = 0, 1, 2


def _locate_state(P: SimplePolygon, q: Point2,
                  beacon: Point2) -> Tuple[int, int]:
    loc = P.contains(q)
    if loc == Location.INTERIOR:
        return _FREE, -1
    eps = P.tol.eps_geom
    for i, v in enumerate(P.vertices):
        if dist(q, v) <= 2.0 * eps:
            return _VERTEX, i
    k, _ = _nearest_edge(P, q)
    a, b = P.edge(k)
    if cross(sub(b, a), sub(beacon, a)) > eps * dist(a, b):
        return _FREE, -1        # beacon strictly on the interior side
    return _EDGE, k


# -- the simulator -----------------------------------------------------------

def simulate(P: SimplePolygon, start: Point2, beacon: Point2,
             budget: Optional[int] = None) -> Trajectory:
    """Trajectory of `start` under greedy attraction toward `beacon`.

    Every event is an exact boundary hit, projection foot, or vertex, so
    equal inputs reproduce equal traces. BudgetExceeded signals a
    simulation bug, not a property of the input.
    """
    start = (float(start[0]), float(start[1]))
    beacon = (float(beacon[0]), float(beacon[1]))
    if P.contains(start) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"start {start} lies outside the polygon")
    if P.contains(beacon) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"beacon {beacon} lies outside the polygon")
    if budget is None:
        budget = 10 * P.n
    eps_dist = P.tol.eps_dist
    eps = P.tol.eps_geom

    edges: List[TrajectoryEdge] = []
    q = start
    kind, slot = _locate_state(P, q, beacon)
    banned = False          # vertex pull suppressed after a grazing failure
    prev_gap = dist(q, beacon)
    slow = 0

    def emit(edge: TrajectoryEdge) -> None:
        nonlocal prev_gap, slow
        edges.append(edge)
        gap = dist(edge.dst, beacon)
        slow = slow + 1 if prev_gap - gap < eps_dist else 0
        prev_gap = gap

    while True:
        if dist(q, beacon) <= eps_dist:
            return Trajectory(start, beacon, tuple(edges), ReachedBeacon())
        if slow >= 2:
            # two consecutive events below the progress floor: converged
            return Trajectory(start, beacon, tuple(edges), DeadPoint(q))
        if len(edges) >= budget:
            raise BudgetExceeded(
                f"no outcome after {len(edges)} events (budget {budget})")

        if kind == _FREE:
            if P.sees(q, beacon):
                emit(TrajectoryEdge(MoveKind.PULL, q, beacon))
                q = beacon
                continue
            try:
                z = P.ray_shoot(q, sub(beacon, q))
            except RayExitsImmediately:
                kind, slot = _locate_state(P, q, beacon)
                if kind == _FREE:   # cannot recur; guard against looping
                    return Trajectory(start, beacon, tuple(edges),
                                      DeadPoint(q))
                banned = True
                continue
            if dist(q, z.point) > 0.0:
                emit(TrajectoryEdge(MoveKind.PULL, q, z.point))
            q = z.point
            kind = _VERTEX if z.is_vertex() else _EDGE
            slot = z.edge_index
            continue

        if kind == _VERTEX:
            i = slot
            v = P.vertices[i]
            q = v
            d = sub(beacon, v)
            if not banned and _cone_feasible(P, i, d):
                kind = _FREE
                continue
            banned = False
            r_prev, r_next = _slide_rates(P, i, d)
            if r_prev <= eps and r_next <= eps:
                return Trajectory(start, beacon, tuple(edges), DeadPoint(v))
            # steepest descent; the chosen edge always has the beacon on
            # its outer side, so the slide below cannot stall
            kind, slot = _EDGE, (i if r_next >= r_prev else (i - 1) % P.n)
            continue

        # on edge `slot`, beacon not strictly on the interior side
        k = slot
        a, b = P.edge(k)
        t_eps = eps / max(dist(a, b), 1e-300)
        t_q = _edge_param(a, b, q)
        h = orthogonal_projection(beacon, a, sub(b, a))
        t_h = _edge_param(a, b, h)
        t_target = min(max(t_h, 0.0), 1.0)
        if abs(t_target - t_q) <= t_eps:
            return Trajectory(start, beacon, tuple(edges), DeadPoint(q))
        if t_target <= t_eps:
            target = a
        elif t_target >= 1.0 - t_eps:
            target = b
        else:
            target = lerp(a, b, t_target)
        emit(TrajectoryEdge(MoveKind.SLIDE, q, target, k))
        q = target
        if t_target <= t_eps:
            kind, slot = _VERTEX, k
        elif t_target >= 1.0 - t_eps:
            kind, slot = _VERTEX, (k + 1) % P.n


def attracts(P: SimplePolygon, beacon: Point2, point: Point2,
             budget: Optional[int] = None) -> bool:
    """True when the beacon draws the point all the way to itself."""
    return simulate(P, point, beacon, budget=budget).reached


def split_edge(P: SimplePolygon, r: int,
               beacon: Point2) -> Optional[Chord]:
    """Chord shot from reflex vertex r away from a beacon in its deadwedge.

    Returns None when the beacon sits outside the deadwedge, in which
    case r does not separate trajectories for this beacon.
    """
    r %= P.n
    wedge = P.deadwedge(r)      # raises NotReflex
    if not wedge.contains(beacon, P.tol.eps_geom):
        return None
    v = P.vertices[r]
    if dist(beacon, v) <= P.tol.eps_dist:
        return None
    try:
        hit = P.ray_shoot(v, sub(v, beacon))
    except RayExitsImmediately:
        return None
    return P.chord(r, hit)


# -- sampling oracle ---------------------------------------------------------

@dataclass(frozen=True)
class SampleGrid:
    """Axis-aligned lattice anchored at the bounding-box corner."""
    resolution: float
    margin: float = 0.0

    def __post_init__(self):
        if not self.resolution > 0.0:
            raise ValueError("resolution must be positive")
        if self.margin < 0.0:
            raise ValueError("margin must be nonnegative")


def sample_inverse_attraction(
        P: SimplePolygon, p: Point2,
        grid: SampleGrid) -> List[Tuple[Point2, bool]]:
    """Label every interior grid point q by whether beacon q attracts p.

    Points within `margin` of the boundary are skipped; output is in
    row-major grid order, so equal inputs give identical sample sets.
    """
    p = (float(p[0]), float(p[1]))
    if P.contains(p) == Location.EXTERIOR:
        raise PointOutsidePolygon(f"point {p} lies outside the polygon")
    res = grid.resolution
    xmin = float(P.xs.min())
    ymin = float(P.ys.min())
    nx = int(math.floor((float(P.xs.max()) - xmin) / res)) + 1
    ny = int(math.floor((float(P.ys.max()) - ymin) / res)) + 1
    out: List[Tuple[Point2, bool]] = []
    for iy in range(ny):
        y = ymin + res * iy
        for ix in range(nx):
            q = (xmin + res * ix, y)
            if P.contains(q) != Location.INTERIOR:
                continue
            if kernels.min_edge_distance(P.xs, P.ys, q[0], q[1]) <= grid.margin:
                continue
            out.append((q, attracts(P, q, p)))
    return out


# -- trajectory validation ---------------------------------------------------

class InvariantChecker:
    """Checks simulated trajectories against the motion-model guarantees.

    Violations are returned as strings rather than raised so large sweeps
    can aggregate them; an empty list certifies the trajectory. Geodesic
    distances are answered from a shortest-path map cached per source.
    """

    def __init__(self, P: SimplePolygon, rel_tol: float = 1e-7):
        self.P = P
        self.tol = rel_tol * P.diameter
        self.angle_tol = rel_tol
        self.checked = 0
        self._fields: Dict[Point2, tuple] = {}

    def check(self, traj: Trajectory) -> List[str]:
        self.checked += 1
        out: List[str] = []
        self._check_distance(traj, out)
        self._check_angles(traj, out)
        self._check_geodesic(traj, out)
        self._check_dead(traj, out)
        return out

    # distance to the beacon decreases between consecutive events
    def _check_distance(self, traj: Trajectory, out: List[str]) -> None:
        pts = traj.event_points()
        for i in range(len(pts) - 1):
            d0 = dist(pts[i], traj.beacon)
            d1 = dist(pts[i + 1], traj.beacon)
            if d1 - d0 > self.tol:
                out.append(f"distance grew at event {i}: {d0:.12g} -> {d1:.12g}")

    # pull and slide meet at an angle wider than a right angle
    def _check_angles(self, traj: Trajectory, out: List[str]) -> None:
        for i, (e0, e1) in enumerate(zip(traj.edges, traj.edges[1:])):
            if e0.kind == e1.kind:
                continue
            if dot(unit(e0.vector), unit(e1.vector)) < -self.angle_tol:
                out.append(f"sharp turn at event {i + 1}")

    # geodesic distance from the start never shrinks along the trace
    def _check_geodesic(self, traj: Trajectory, out: List[str]) -> None:
        pts = traj.event_points()
        g = [self._geo_dist(traj.start, q) for q in pts]
        for i in range(len(g) - 1):
            if g[i + 1] < g[i] - self.tol:
                out.append(
                    f"geodesic distance shrank at event {i}: "
                    f"{g[i]:.12g} -> {g[i + 1]:.12g}")

    def _field(self, source: Point2) -> tuple:
        f = self._fields.get(source)
        if f is None:
            f = (shortest_paths.shortest_path_map(self.P, source),
                 shortest_paths.pruned_spt(self.P, source))
            self._fields[source] = f
        return f

    def _geo_dist(self, source: Point2, q: Point2) -> float:
        regions, spt = self._field(source)
        best = math.inf
        for region in regions:
            if region.cell.contains(q) != Location.EXTERIOR:
                base_d = 0.0 if region.base_index == shortest_paths.ROOT \
                    else spt.dist[region.base_index]
                best = min(best, base_d + dist(region.base, q))
        if best is math.inf:
            best = shortest_paths.geodesic(self.P, source, q).length
        return best

    # a dead point carries a stationarity certificate
    def _check_dead(self, traj: Trajectory, out: List[str]) -> None:
        if not isinstance(traj.outcome, DeadPoint):
            return
        d = traj.outcome.point
        b = traj.beacon
        P = self.P
        if dist(d, b) <= P.tol.eps_dist:
            out.append("dead point coincides with the beacon")
            return
        snap = max(self.tol, P.tol.eps_dist)
        for i, v in enumerate(P.vertices):
            if dist(d, v) <= snap:
                r_prev, r_next = _slide_rates(P, i, sub(b, v))
                if r_prev > snap or r_next > snap:
                    out.append(f"dead vertex {i} still has a descending edge")
                elif _cone_feasible(P, i, sub(b, v)):
                    out.append(f"dead vertex {i} still has a feasible pull")
                return
        k, off = _nearest_edge(P, d)
        if off > snap:
            out.append("dead point is not on the boundary")
            return
        a, bb = P.edge(k)
        h = orthogonal_projection(b, a, sub(bb, a))
        if dist(d, h) > 4.0 * snap:
            out.append(
                f"dead point is not the beacon's projection on edge {k}")
        if cross(sub(bb, a), sub(b, a)) > P.tol.eps_geom * dist(a, bb):
            out.append(f"pull at the dead point enters through edge {k}")
