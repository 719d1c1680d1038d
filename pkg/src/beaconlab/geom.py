"""Low-level planar primitives: orientation, half-planes, wedges, projections.

Every tolerance decision in the package funnels through this module. The
convention: a cross product whose magnitude is at most ``eps_geom * scale``
counts as zero, where ``scale`` is the largest coordinate magnitude taking
part in the computation and ``eps_geom`` is an absolute length tolerance
(by default a 1e-9 fraction of the instance diameter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .errors import DegenerateInput

Point2 = Tuple[float, float]
Segment = Tuple[Point2, Point2]

CCW = 1
CW = -1
COLLINEAR = 0

# Default relative tolerances, as fractions of the instance bbox diameter.
REL_EPS_GEOM = 1e-9
REL_EPS_DIST = 1e-7


def sub(a: Point2, b: Point2) -> Point2:
    return (a[0] - b[0], a[1] - b[1])


def dot(a: Point2, b: Point2) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Point2, b: Point2) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Point2) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point2, b: Point2) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(a: Point2) -> Point2:
    n = math.hypot(a[0], a[1])
    if n == 0.0:
        raise DegenerateInput("cannot normalize a zero vector")
    return (a[0] / n, a[1] / n)


def lerp(a: Point2, b: Point2, t: float) -> Point2:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Distance from p to the closed segment ab."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return dist(p, a)
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2
    t = min(max(t, 0.0), 1.0)
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerances: eps_geom for predicates, eps_dist for termination.

    eps_dist is the coarser of the two; simulation stops within eps_dist of
    the beacon while geometric predicates resolve at eps_geom.
    """

    eps_geom: float
    eps_dist: float

    def __post_init__(self):
        if not (self.eps_geom > 0.0 and math.isfinite(self.eps_geom)):
            raise DegenerateInput("eps_geom must be positive and finite")
        if self.eps_dist < self.eps_geom:
            raise DegenerateInput("eps_dist must be at least eps_geom")

    @classmethod
    def for_diameter(cls, diameter: float, rel_geom: float = REL_EPS_GEOM,
                     rel_dist: float = REL_EPS_DIST) -> "Tolerance":
        d = max(diameter, 1e-300)
        return cls(eps_geom=rel_geom * d, eps_dist=rel_dist * d)


def orientation(a: Point2, b: Point2, c: Point2,
                eps_geom: Optional[float] = None) -> int:
    """Orientation of the triple (a, b, c): CCW, CW or COLLINEAR.

    The cross product is compared against eps_geom * scale, scale being the
    largest coordinate magnitude among the inputs. When eps_geom is omitted
    it defaults to REL_EPS_GEOM * scale.
    """
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    scale = max(abs(a[0]), abs(a[1]), abs(b[0]), abs(b[1]),
                abs(c[0]), abs(c[1]), 1e-300)
    if eps_geom is None:
        eps_geom = REL_EPS_GEOM * scale
    if abs(v) <= eps_geom * scale:
        return COLLINEAR
    return CCW if v > 0.0 else CW


class HalfPlane:
    """Closed half-plane {(x, y) : a*x + b*y <= c} with unit normal (a, b)."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a: float, b: float, c: float):
        n = math.hypot(a, b)
        if n == 0.0 or not math.isfinite(n):
            raise DegenerateInput("half-plane normal must be nonzero and finite")
        self.a = a / n
        self.b = b / n
        self.c = c / n

    @classmethod
    def toward(cls, anchor: Point2, direction: Point2) -> "HalfPlane":
        """The half-plane {q : (q - anchor) . direction >= 0}."""
        d = unit(direction)
        return cls(-d[0], -d[1], -(d[0] * anchor[0] + d[1] * anchor[1]))

    def value(self, q: Point2) -> float:
        """Signed distance to the boundary; <= 0 inside."""
        return self.a * q[0] + self.b * q[1] - self.c

    def contains(self, q: Point2, eps: float = 0.0) -> bool:
        return self.value(q) <= eps

    def complement(self) -> "HalfPlane":
        """The closed half-plane on the other side of the same boundary line."""
        return HalfPlane(-self.a, -self.b, -self.c)

    def boundary_point(self) -> Point2:
        return (self.a * self.c, self.b * self.c)

    def boundary_direction(self) -> Point2:
        return (-self.b, self.a)

    def __repr__(self):
        return f"HalfPlane({self.a:.17g}, {self.b:.17g}, {self.c:.17g})"

    def __eq__(self, other):
        if not isinstance(other, HalfPlane):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c

    def __hash__(self):
        return hash((self.a, self.b, self.c))


@dataclass(frozen=True)
class Wedge:
    """Intersection of two half-planes whose boundaries pass through an apex."""

    apex: Point2
    first: HalfPlane
    second: HalfPlane

    def __post_init__(self):
        s = max(abs(self.apex[0]), abs(self.apex[1]), 1.0)
        for hp in (self.first, self.second):
            if abs(hp.value(self.apex)) > 1e-6 * s:
                raise DegenerateInput("wedge boundaries must pass through the apex")

    def contains(self, q: Point2, eps: float = 0.0) -> bool:
        return self.first.contains(q, eps) and self.second.contains(q, eps)


def orthogonal_projection(p: Point2, anchor: Point2, direction: Point2) -> Point2:
    """Project p onto the line through anchor with the given direction.

    Raises DegenerateInput on a zero-length direction.
    """
    d = unit(direction)
    t = (p[0] - anchor[0]) * d[0] + (p[1] - anchor[1]) * d[1]
    return (anchor[0] + t * d[0], anchor[1] + t * d[1])


def clip_convex(poly: Sequence[Point2], hp: HalfPlane,
                eps: float = 0.0) -> List[Point2]:
    """One Sutherland-Hodgman step: clip a convex CCW ring by a half-plane.

    Vertices within eps of the boundary are kept. Returns [] when nothing
    remains.
    """
    out: List[Point2] = []
    m = len(poly)
    if m == 0:
        return out
    vals = [hp.value(q) for q in poly]
    for i in range(m):
        j = (i + 1) % m
        vi, vj = vals[i], vals[j]
        if vi <= eps:
            out.append(poly[i])
            if vj > eps and vi < -eps:
                t = vi / (vi - vj)
                out.append(lerp(poly[i], poly[j], t))
        elif vj < -eps:
            t = vi / (vi - vj)
            out.append(lerp(poly[i], poly[j], t))
    # collapse consecutive duplicates introduced by near-boundary vertices
    if len(out) >= 2:
        dedup = [out[0]]
        for q in out[1:]:
            if abs(q[0] - dedup[-1][0]) > eps or abs(q[1] - dedup[-1][1]) > eps:
                dedup.append(q)
        while len(dedup) >= 2 and abs(dedup[0][0] - dedup[-1][0]) <= eps \
                and abs(dedup[0][1] - dedup[-1][1]) <= eps:
            dedup.pop()
        out = dedup
    return out if len(out) >= 3 else []


def halfplane_intersection(planes: Sequence[HalfPlane],
                           bbox: Tuple[float, float, float, float],
                           eps: float = 0.0) -> List[Point2]:
    """Intersect half-planes within a bounding box.

    Returns the CCW vertex ring of the (convex, possibly empty) region.
    bbox is (xmin, ymin, xmax, ymax) and bounds the result even when the
    analytic intersection is unbounded.
    """
    xmin, ymin, xmax, ymax = bbox
    if not (xmin < xmax and ymin < ymax):
        raise DegenerateInput("bounding box must have positive extent")
    region: List[Point2] = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]
    for hp in planes:
        region = clip_convex(region, hp, eps)
        if not region:
            return []
    return region


def segment_intersection(s1: Segment, s2: Segment,
                         eps_geom: Optional[float] = None
                         ) -> Union[None, Point2, Segment]:
    """Intersection of two closed segments.

    Returns None when disjoint, a Point2 for a single intersection point
    (endpoint touches included) and a (Point2, Point2) segment for a
    collinear overlap of positive length.
    """
    (a, b), (c, d) = s1, s2
    # The floor keeps squared lengths of eps-sized spans away from
    # underflow, so degenerate inputs collapse into the point branches.
    scale = max(abs(a[0]), abs(a[1]), abs(b[0]), abs(b[1]),
                abs(c[0]), abs(c[1]), abs(d[0]), abs(d[1]), 1e-150)
    if eps_geom is None:
        eps_geom = REL_EPS_GEOM * scale
    r = sub(b, a)
    s = sub(d, c)
    denom = cross(r, s)
    qp = sub(c, a)
    len_r = norm(r)
    len_s = norm(s)
    # Branch on the angle between the segments, not on eps_geom: the
    # denominator is len_r*len_s*sin(angle), and the noise floor of the
    # cross product is about 1e-16*scale*max(len_r, len_s).
    denom_tol = max(1e-12 * len_r * len_s,
                    4e-16 * scale * max(len_r, len_s))
    if abs(denom) <= denom_tol:
        if len_r <= eps_geom:
            # s1 is (nearly) a single point
            return a if point_segment_distance(a, c, d) <= eps_geom else None
        if len_s <= eps_geom:
            mid = lerp(c, d, 0.5)
            return mid if point_segment_distance(mid, a, b) <= eps_geom else None
        # near-parallel: collinear when either segment sits on the other's
        # supporting line (tested both ways so the answer is symmetric)
        on1 = (abs(cross(qp, r)) <= eps_geom * len_r and
               abs(cross(sub(d, a), r)) <= eps_geom * len_r)
        on2 = (abs(cross(sub(a, c), s)) <= eps_geom * len_s and
               abs(cross(sub(b, c), s)) <= eps_geom * len_s)
        if not (on1 or on2):
            return None
        # collinear: parametrize both on s1's axis
        rr = dot(r, r)
        t0 = dot(qp, r) / rr
        t1 = t0 + dot(s, r) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        eps_t = eps_geom / math.sqrt(rr)
        lo = max(lo, 0.0)
        hi = min(hi, 1.0)
        if hi < lo - eps_t:
            return None
        if hi - lo <= eps_t:
            t = 0.5 * (max(lo, 0.0) + min(hi, 1.0))
            return lerp(a, b, min(max(t, 0.0), 1.0))
        return (lerp(a, b, lo), lerp(a, b, hi))
    t = cross(qp, s) / denom
    u = cross(qp, r) / denom
    eps_t = eps_geom / max(len_r, 1e-300)
    eps_u = eps_geom / max(len_s, 1e-300)
    if -eps_t <= t <= 1.0 + eps_t and -eps_u <= u <= 1.0 + eps_u:
        t = min(max(t, 0.0), 1.0)
        return lerp(a, b, t)
    return None
