"""Instance generators: envelope staircases, random polygons, comb families.

Three families feed the test suite and the benchmark harness:

* ``zigzag_polygon`` builds a monotone corridor staircase from a family of
  shallow lines.  Inside its query box the inverse attraction region of the
  distinguished point is bounded above by the lower envelope of the lines,
  so an independent ``lower_envelope`` oracle can cross-check the region
  computed by the main pipeline.
* ``random_polygon`` produces seed-deterministic simple polygons by 2-opt
  untangling of random point tours.
* ``comb_polygon`` builds a corridor with dogleg pockets whose inverse
  attraction region splits into at least ``k`` connected components; the
  instance is certified by the trajectory oracle before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .attraction import SampleGrid, sample_inverse_attraction
from .errors import (CertificationFailed, DegenerateInput, DegenerateSlopes,
                     DuplicateVertex, SelfIntersecting)
from .geom import HalfPlane, Point2
from .polygon import SimplePolygon

__all__ = [
    "LineSpec",
    "Envelope",
    "ZigzagInstance",
    "lower_envelope",
    "zigzag_lines",
    "zigzag_polygon",
    "random_polygon",
    "comb_polygon",
]

# Slopes above this make the unit-slope connector walls of the staircase
# ambiguous, so they are rejected outright.
_SLOPE_CAP = 0.2

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class LineSpec:
    """Non-vertical line y = slope * x + intercept."""

    slope: float
    intercept: float

    def y(self, x: float) -> float:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class Envelope:
    """Lower envelope of a line family.

    ``lines`` is the activation sequence from left to right (slopes strictly
    decreasing along it) and ``breakpoints`` the switch points in increasing
    x; a single active line has no breakpoints.
    """

    lines: Tuple[LineSpec, ...]
    breakpoints: Tuple[Point2, ...]

    def value(self, x: float) -> float:
        return min(ln.y(x) for ln in self.lines)


@dataclass(frozen=True)
class ZigzagInstance:
    """Staircase polygon with its query box and slope -1 lower bound.

    ``polygon`` is x-monotone; ``p`` is the leftmost vertex of the upper
    corridor chain; ``R = (xmin, ymin, xmax, ymax)`` contains every pairwise
    intersection of the generating lines; ``L_u`` is the half-plane of
    admissible beacons bounded by the slope -1 line through the highest
    connector corner, and it lies strictly left of the leftmost envelope
    vertex.
    """

    polygon: SimplePolygon
    p: Point2
    R: Tuple[float, float, float, float]
    L_u: HalfPlane


# ---------------------------------------------------------------------------
# lower envelope


def _cross_x(a: LineSpec, b: LineSpec) -> float:
    # abscissa where the two (non-parallel) lines meet
    return (b.intercept - a.intercept) / (a.slope - b.slope)


def _lower_at(a: LineSpec, b: LineSpec, x: float) -> LineSpec:
    """The line that is lower on a short interval just right of x."""
    if x == -math.inf:
        if a.slope != b.slope:
            return a if a.slope > b.slope else b
        return a if a.intercept <= b.intercept else b
    va, vb = a.y(x), b.y(x)
    if va != vb:
        return a if va < vb else b
    # tie at x: the smaller slope wins immediately to the right
    if a.slope != b.slope:
        return a if a.slope < b.slope else b
    return a if a.intercept <= b.intercept else b


def _merge_envelopes(A: List[LineSpec], B: List[LineSpec]) -> List[LineSpec]:
    """Sweep two envelopes (activation lists) into one."""
    out: List[LineSpec] = []
    i = j = 0
    x = -math.inf
    while True:
        a, b = A[i], B[j]
        low = _lower_at(a, b, x)
        if not out or out[-1] != low:
            out.append(low)
        xa = _cross_x(A[i], A[i + 1]) if i + 1 < len(A) else math.inf
        xb = _cross_x(B[j], B[j + 1]) if j + 1 < len(B) else math.inf
        if a.slope != b.slope:
            xc = _cross_x(a, b)
            if xc <= x:
                xc = math.inf
        else:
            xc = math.inf
        event = min(xa, xb, xc)
        if event == math.inf:
            return out
        if xa == event:
            i += 1
        if xb == event:
            j += 1
        x = event


def _envelope_lines(lines: List[LineSpec]) -> List[LineSpec]:
    if len(lines) == 1:
        return lines
    mid = len(lines) // 2
    return _merge_envelopes(_envelope_lines(lines[:mid]),
                            _envelope_lines(lines[mid:]))


def lower_envelope(lines: Sequence[LineSpec]) -> Envelope:
    """Pointwise minimum of a line family, by divide and conquer.

    Returns the activation sequence and its breakpoints in increasing x.
    Parallel lines are dominated by the lowest intercept among them; exact
    duplicates collapse to one activation.
    """
    specs = [LineSpec(float(ln.slope), float(ln.intercept)) for ln in lines]
    if not specs:
        raise DegenerateInput("need at least one line")
    for ln in specs:
        if not (math.isfinite(ln.slope) and math.isfinite(ln.intercept)):
            raise DegenerateInput(f"non-finite line {ln}")
    seq = _envelope_lines(specs)
    breaks: List[Point2] = []
    for a, b in zip(seq, seq[1:]):
        bx = _cross_x(a, b)
        breaks.append((bx, 0.5 * (a.y(bx) + b.y(bx))))
    return Envelope(tuple(seq), tuple(breaks))


# ---------------------------------------------------------------------------
# staircase corridor construction


def zigzag_lines(k: int, eps: float = 0.05) -> List[LineSpec]:
    """Default family of k shallow lines with slopes in (0, eps).

    Consecutive-slope pairs meet at x = 1, 2, ..., k-1, so every pairwise
    intersection lands in that interval and the lower envelope activates all
    k lines.
    """
    if k < 1:
        raise DegenerateInput("need at least one line")
    if not (0.0 < eps <= _SLOPE_CAP):
        raise DegenerateSlopes(f"slope bound {eps} outside (0, {_SLOPE_CAP}]")
    slopes = [eps * i / (k + 1) for i in range(1, k + 1)]
    intercepts = [0.0] * k
    for j in range(k - 2, -1, -1):
        # line j and j+1 (0-based) meet at x = k - 1 - j
        intercepts[j] = (intercepts[j + 1]
                         + (slopes[j + 1] - slopes[j]) * (k - 1 - j))
    return [LineSpec(m, c) for m, c in zip(slopes, intercepts)]


def _intersection_box(specs: List[LineSpec]) -> Tuple[float, float,
                                                      float, float, float]:
    """Padded box around all pairwise line intersections.

    With slopes sorted ascending, the meet of lines i < j has an abscissa
    that is a convex combination of the consecutive-pair abscissas between
    them, so scanning adjacent pairs bounds the lot in O(k).
    """
    k = len(specs)
    if k == 1:
        x_lo, x_hi = 0.0, 1.0
    else:
        xs = [_cross_x(specs[t], specs[t + 1]) for t in range(k - 1)]
        x_lo, x_hi = min(xs), max(xs)
    ys = [ln.y(x_lo) for ln in specs] + [ln.y(x_hi) for ln in specs]
    y_lo, y_hi = min(ys), max(ys)
    pad = max(1.0, 0.05 * max(x_hi - x_lo, y_hi - y_lo))
    return x_lo - pad, y_lo - pad, x_hi + pad, y_hi + pad, pad


def _is_x_monotone(vertices: Sequence[Point2]) -> bool:
    """True when the ring splits into two x-monotone chains."""
    n = len(vertices)
    signs = []
    for i in range(n):
        dx = vertices[(i + 1) % n][0] - vertices[i][0]
        if dx != 0.0:
            signs.append(1 if dx > 0.0 else -1)
    if not signs:
        return False
    flips = sum(1 for s, t in zip(signs, signs[1:] + signs[:1]) if s != t)
    return flips == 2


def _build_tube(specs: List[LineSpec], x_start: float, width: float,
                y_bot: float, y_top: float, x_right: float
                ) -> Tuple[List[Point2], Point2, float, float, float]:
    """Vertex ring for one staircase placement.

    Returns (ring, p, max tube x, highest connector x+y, last gate y).
    Gate i sits on line i; each descent wall is perpendicular to its line
    and each connector wall has slope 1, so the constraint line generated
    at gate i is exactly line i and every connector corner contributes a
    slope -1 bound.
    """
    k = len(specs)
    d_diag = (1.0 / _SQRT2, 1.0 / _SQRT2)

    def wall_dirs(ln: LineSpec) -> Tuple[Point2, Point2]:
        sq = math.hypot(1.0, ln.slope)
        e = (ln.slope / sq, -1.0 / sq)          # downhill, perpendicular
        nw = (-1.0 / sq, -ln.slope / sq)        # unit left offset of e
        return e, nw

    e0, nw0 = wall_dirs(specs[0])
    v0 = (x_start, specs[0].y(x_start))
    h0 = 10.0 * width
    p = (v0[0] - h0 * e0[0], v0[1] - h0 * e0[1])
    pp = (p[0] + width * nw0[0], p[1] + width * nw0[1])

    tops: List[Point2] = [p]        # upper end of each descent wall
    vs: List[Point2] = []           # gates, one per line
    as_: List[Point2] = []          # upper connector corners
    bs: List[Point2] = []           # lower corners of the descent walls
    ws: List[Point2] = []           # lower connector corners

    for i, ln in enumerate(specs):
        e, nw = wall_dirs(ln)
        top = tops[i]
        if i == 0:
            v = v0
        else:
            # drop from the previous connector corner onto line i
            t = (top[1] - ln.slope * top[0] - ln.intercept) / math.hypot(
                1.0, ln.slope)
            v = (top[0] + t * e[0], top[1] + t * e[1])
        vs.append(v)
        if i < k - 1:
            a = (v[0] + width * d_diag[0], v[1] + width * d_diag[1])
        else:
            rise = y_top - v[1]
            a = (v[0] + rise, y_top)
        as_.append(a)
        tops.append(a)
        # slope 1 wall sitting `width` below the gate corner
        d_south = (v[0] + width / _SQRT2) - (v[1] - width / _SQRT2)
        q = (top[0] + width * nw[0], top[1] + width * nw[1])
        tb = (d_south - (q[0] - q[1])) / ((1.0 + ln.slope) / math.hypot(
            1.0, ln.slope))
        bs.append((q[0] + tb * e[0], q[1] + tb * e[1]))
        if i < k - 1:
            e2, nw2 = wall_dirs(specs[i + 1])
            q2 = (a[0] + width * nw2[0], a[1] + width * nw2[1])
            tw = (d_south - (q2[0] - q2[1])) / ((1.0 + specs[i + 1].slope)
                                                / math.hypot(
                                                    1.0, specs[i + 1].slope))
            ws.append((q2[0] + tw * e2[0], q2[1] + tw * e2[1]))
        else:
            ws.append((d_south + y_bot, y_bot))

    ring: List[Point2] = [pp]
    for b, w in zip(bs, ws):
        ring.append(b)
        ring.append(w)
    ring.append((x_right, y_bot))
    ring.append((x_right, y_top))
    for i in range(k - 1, -1, -1):
        ring.append(as_[i])
        ring.append(vs[i])
    ring.append(p)

    tube_max_x = max(pt[0] for pt in [pp, p] + vs + as_ + bs + ws)
    k_max = max(w[0] + w[1] for w in ws)
    return ring, p, tube_max_x, k_max, vs[-1][1]


def zigzag_polygon(lines: Sequence[LineSpec]) -> ZigzagInstance:
    """Monotone corridor staircase for a family of shallow lines.

    The corridor visits one gate per line, ordered by slope; a box right of
    the corridor contains every pairwise line intersection.  Within that box
    the inverse attraction region of ``p`` is the part below the lower
    envelope of the lines and above the slope -1 bound ``L_u``.

    Raises DegenerateSlopes when the slopes are out of range, not pairwise
    distinct, or too close together for the corridor widths to stay clear of
    coordinate tolerance.
    """
    specs = sorted((LineSpec(float(ln.slope), float(ln.intercept))
                    for ln in lines), key=lambda ln: ln.slope)
    if not specs:
        raise DegenerateInput("need at least one line")
    for ln in specs:
        if not (math.isfinite(ln.slope) and math.isfinite(ln.intercept)):
            raise DegenerateInput(f"non-finite line {ln}")
        if not (0.0 < ln.slope <= _SLOPE_CAP):
            raise DegenerateSlopes(
                f"slope {ln.slope} outside (0, {_SLOPE_CAP}]")
    for a, b in zip(specs, specs[1:]):
        if a.slope == b.slope:
            raise DegenerateSlopes(f"duplicate slope {a.slope}")

    k = len(specs)
    x_lo, y_lo, x_hi, y_hi, pad = _intersection_box(specs)
    R = (x_lo, y_lo, x_hi, y_hi)

    env = lower_envelope(specs)
    if env.breakpoints:
        wx, wy = env.breakpoints[0]
        k_limit = wx + wy
    else:
        k_limit = x_lo + min(ln.y(x_lo) for ln in specs)
    if k >= 2:
        x_q = (k_limit - specs[0].intercept) / (1.0 + specs[0].slope)
    else:
        x_q = x_lo
    x0 = min(x_lo, x_q) - pad

    if k >= 2:
        gaps = [specs[t].y(x0) - specs[t + 1].y(x0) for t in range(k - 1)]
        width = min(gaps) / 2.0
    else:
        width = pad / 8.0
    if not width > 0.0:
        raise DegenerateSlopes("line gaps vanish left of the query box")

    amp = pad + (y_hi - y_lo) + 1.0
    ring = p = None
    k_max = 0.0
    for _ in range(64):
        ring, p, tube_max_x, k_max, v_last_y = _build_tube(
            specs, x0 - amp, width, y_lo, y_hi, x_hi)
        # the last gate must sit below the box floor so the closing
        # connector climbs rightward onto it
        if (tube_max_x <= x0 and k_max <= k_limit - pad / 2.0
                and v_last_y <= y_lo - 4.0 * width):
            break
        amp *= 2.0
    else:
        raise DegenerateSlopes("corridor placement did not converge")

    span = max(x_hi - min(pt[0] for pt in ring), y_hi - y_lo)
    if width < 32.0 * 1e-9 * span:
        raise DegenerateSlopes(
            "slopes too close: corridor width is below coordinate tolerance")

    try:
        P = SimplePolygon(ring)
    except (SelfIntersecting, DuplicateVertex, DegenerateInput) as exc:
        raise DegenerateSlopes(f"degenerate corridor geometry: {exc}") from exc
    if not _is_x_monotone(P.vertices):
        raise DegenerateSlopes("constructed ring is not x-monotone")

    L_u = HalfPlane(-1.0, -1.0, -k_max)
    return ZigzagInstance(polygon=P, p=p, R=R, L_u=L_u)


# ---------------------------------------------------------------------------
# random polygons


_SCRATCH_2OPT_MAX = 64


def _first_crossing(ring: np.ndarray) -> Optional[Tuple[int, int]]:
    """Lexicographically first pair of properly crossing edges, if any."""
    n = len(ring)
    nxt = np.roll(ring, -1, axis=0)
    d = nxt - ring
    for i in range(n - 2):
        j0 = i + 2
        j1 = n if i > 0 else n - 1
        if j0 >= j1:
            continue
        a, dab = ring[i], d[i]
        pj = ring[j0:j1]
        qj = nxt[j0:j1]
        dj = d[j0:j1]
        s1 = dab[0] * (pj[:, 1] - a[1]) - dab[1] * (pj[:, 0] - a[0])
        s2 = dab[0] * (qj[:, 1] - a[1]) - dab[1] * (qj[:, 0] - a[0])
        s3 = dj[:, 0] * (a[1] - pj[:, 1]) - dj[:, 1] * (a[0] - pj[:, 0])
        b = ring[i + 1]
        s4 = dj[:, 0] * (b[1] - pj[:, 1]) - dj[:, 1] * (b[0] - pj[:, 0])
        hit = ((s1 * s2) < 0.0) & ((s3 * s4) < 0.0)
        idx = np.nonzero(hit)[0]
        if idx.size:
            return i, j0 + int(idx[0])
    return None


def random_polygon(n: int, seed: int) -> SimplePolygon:
    """Simple polygon on n uniform random points, deterministic per seed.

    Small instances untangle a random tour by 2-opt moves (each reversal
    removes a crossing and shortens the tour, so the loop terminates);
    larger ones start from an angular order around the centroid and repair
    the rare residual crossing the same way.
    """
    if n < 3:
        raise DegenerateInput("polygon needs at least three vertices")
    rng = np.random.default_rng(seed)
    for _ in range(32):
        pts = rng.random((n, 2))
        if n <= _SCRATCH_2OPT_MAX:
            ring = pts[rng.permutation(n)].copy()
            ok = False
            for _ in range(60 * n * n):
                hit = _first_crossing(ring)
                if hit is None:
                    ok = True
                    break
                i, j = hit
                ring[i + 1:j + 1] = ring[i + 1:j + 1][::-1]
            if not ok:
                continue
        else:
            ctr = pts.mean(axis=0)
            rel = pts - ctr
            ang = np.arctan2(rel[:, 1], rel[:, 0])
            rad = np.einsum("ij,ij->i", rel, rel)
            ring = pts[np.lexsort((rad, ang))].copy()
        # validator-driven repair for touches the sign tests cannot see
        for _ in range(5 * n):
            try:
                return SimplePolygon([(float(q[0]), float(q[1]))
                                      for q in ring])
            except SelfIntersecting as exc:
                if exc.edges is None:
                    break
                i, j = sorted(exc.edges)
                ring[i + 1:j + 1] = ring[i + 1:j + 1][::-1]
            except (DuplicateVertex, DegenerateInput):
                break
    raise DegenerateInput(f"no simple polygon found for n={n}, seed={seed}")


# ---------------------------------------------------------------------------
# comb family


# Corridor and tooth measurements for the comb template.  The corridor has
# height 1; tooth i opens over the gap [s_i, s_i + 2] in the ceiling, ducts
# lean left with direction (-2, 1), pockets lean right with direction
# (2, 1), so a pocket re-enters the vertical slab over its own gap near the
# top while the duct below it leaves the slab almost immediately.
_COMB_GAP = 2.0
_COMB_PITCH = 4.0
_COMB_ELBOW_Y = 3.0
_COMB_TOP_Y = 5.5


def _comb_ring(k: int) -> Tuple[List[Point2], float]:
    width = _COMB_PITCH * k + 2.0
    ring: List[Point2] = [(0.0, 0.0), (width, 0.0), (width, 1.0)]
    for i in range(k, 0, -1):
        s = _COMB_PITCH * i - 2.0
        d_el = _COMB_ELBOW_Y - 1.0          # duct rise
        p_el = _COMB_TOP_Y - _COMB_ELBOW_Y  # pocket rise
        ring.append((s + _COMB_GAP, 1.0))
        ring.append((s + _COMB_GAP - 2.0 * d_el, _COMB_ELBOW_Y))
        ring.append((s + _COMB_GAP - 2.0 * d_el + 2.0 * p_el, _COMB_TOP_Y))
        ring.append((s - 2.0 * d_el + 2.0 * p_el, _COMB_TOP_Y))
        ring.append((s - 2.0 * d_el, _COMB_ELBOW_Y))
        ring.append((s, 1.0))
    ring.append((0.0, 1.0))
    return ring, width


def _positive_components(P: SimplePolygon, p: Point2,
                         grid: SampleGrid) -> Tuple[int, List[Point2]]:
    """Count 8-connected lattice components of attracting beacon samples."""
    samples = sample_inverse_attraction(P, p, grid)
    res = grid.resolution
    x0, y0 = P.bbox[0], P.bbox[1]
    pos: Set[Tuple[int, int]] = set()
    pts: List[Point2] = []
    for q, good in samples:
        if good:
            pos.add((round((q[0] - x0) / res), round((q[1] - y0) / res)))
            pts.append(q)
    count = 0
    seen: Set[Tuple[int, int]] = set()
    for cell in pos:
        if cell in seen:
            continue
        count += 1
        stack = [cell]
        seen.add(cell)
        while stack:
            ci, cj = stack.pop()
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    nb = (ci + di, cj + dj)
                    if nb in pos and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
    return count, pts


def comb_polygon(k: int) -> Tuple[SimplePolygon, Point2]:
    """Corridor-with-pockets instance whose region has >= k components.

    Beacons in the top of pocket i draw the point along the corridor
    ceiling and up the duct of tooth i, while the duct interiors strand it
    at a perpendicular foot, so each pocket contributes its own component.
    The count is certified with the trajectory oracle on a coarse grid
    before returning; a shortfall raises CertificationFailed.
    """
    if k < 1:
        raise DegenerateInput("component target must be at least 1")
    if k == 1:
        P = SimplePolygon([(0.0, 0.0), (4.0, 0.0), (4.0, 2.0), (0.0, 2.0)])
        return P, (2.0, 1.0)

    ring, _ = _comb_ring(k)
    P = SimplePolygon(ring)
    p = (0.5, 0.5)

    grid = SampleGrid(0.4, margin=0.15)
    count, pts = _positive_components(P, p, grid)
    if count < k:
        raise CertificationFailed(
            f"expected >= {k} components, sampled {count}")
    for i in range(1, k + 1):
        s = _COMB_PITCH * i - 2.0
        if not any(s <= q[0] <= s + _COMB_GAP and q[1] >= 4.0 for q in pts):
            raise CertificationFailed(
                f"pocket {i} has no attracting sample")
    return P, p
