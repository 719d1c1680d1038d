"""Polygon triangulation.

The default pipeline decomposes the polygon into monotone pieces with a
plane sweep and triangulates each piece with a two-chain stack pass; it
runs in O(n log n) and tolerates vertical and horizontal edges. Ear
clipping is kept both as an independent oracle for tests and as a
fallback when the fast pipeline rejects its own output.

Sweep order is lexicographic by (y, -x); ties in y are broken as if the
plane were rotated infinitesimally clockwise, so every edge has a
distinct upper and lower endpoint. The per-piece pass reuses the same
order by feeding the kernel rotated coordinates (x', y') = (y, -x),
which preserves orientation.

References: de Berg, Cheong, van Kreveld, Overmars, Computational
Geometry: Algorithms and Applications, ch. 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import DegenerateInput

# vertex classes for the monotone-decomposition sweep
_START, _END, _SPLIT, _MERGE, _REGULAR = range(5)


@dataclass
class Triangulation:
    """Triangle fan-out of a simple polygon.

    triangles: (m, 3) int32 vertex indices, each CCW.
    neighbors: (m, 3) int32; neighbors[t, e] is the triangle sharing the
    edge (triangles[t, e], triangles[t, e+1]), or -1 on the boundary.
    """

    xs: np.ndarray
    ys: np.ndarray
    triangles: np.ndarray
    neighbors: np.ndarray
    method: str

    def triangle_count(self) -> int:
        return int(self.triangles.shape[0])

    def triangle_containing(self, x: float, y: float, eps: float = 0.0) -> int:
        """Index of a triangle whose closed interior holds (x, y), or -1."""
        t = self.triangles
        ax, ay = self.xs[t[:, 0]], self.ys[t[:, 0]]
        bx, by = self.xs[t[:, 1]], self.ys[t[:, 1]]
        cx, cy = self.xs[t[:, 2]], self.ys[t[:, 2]]
        c1 = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
        c2 = (cx - bx) * (y - by) - (cy - by) * (x - bx)
        c3 = (ax - cx) * (y - cy) - (ay - cy) * (x - cx)
        ok = (c1 >= -eps) & (c2 >= -eps) & (c3 >= -eps)
        hits = np.nonzero(ok)[0]
        return int(hits[0]) if hits.size else -1


def triangulate(polygon, method: str = "auto") -> Triangulation:
    """Triangulate a SimplePolygon; results are cached per method."""
    cache = polygon._tri_cache
    if cache is None:
        cache = polygon._tri_cache = {}
    if method in cache:
        return cache[method]
    xs, ys = polygon.xs, polygon.ys
    n = polygon.n
    if method not in ("auto", "monotone", "earclip"):
        raise ValueError(f"unknown triangulation method {method!r}")
    if n == 3:
        tris = np.array([[0, 1, 2]], dtype=np.int32)
        result = _finish(xs, ys, tris, method)
    elif method == "earclip":
        tris = _earclip_ring([(xs[i], ys[i]) for i in range(n)])
        result = _finish(xs, ys, tris, "earclip")
    else:
        try:
            tris = _triangulate_monotone_pipeline(xs, ys)
            result = _finish(xs, ys, tris, "monotone")
            _validate(polygon, result)
        except (ValueError, DegenerateInput):
            if method == "monotone":
                raise
            tris = _earclip_ring([(xs[i], ys[i]) for i in range(n)])
            result = _finish(xs, ys, tris, "earclip-fallback")
    cache[method] = result
    return result


def _finish(xs, ys, tris, method) -> Triangulation:
    return Triangulation(xs, ys, tris, _build_neighbors(len(xs), tris), method)


def _validate(polygon, result: Triangulation) -> None:
    if result.triangle_count() != polygon.n - 2:
        raise ValueError("triangle count mismatch")
    t = result.triangles
    xs, ys = result.xs, result.ys
    ax, ay = xs[t[:, 0]], ys[t[:, 0]]
    areas = 0.5 * ((xs[t[:, 1]] - ax) * (ys[t[:, 2]] - ay)
                   - (ys[t[:, 1]] - ay) * (xs[t[:, 2]] - ax))
    if areas.min() < 0.0:
        raise ValueError("flipped triangle")
    if abs(float(areas.sum()) - polygon.area) > 1e-9 * polygon.area:
        raise ValueError("triangle areas do not sum to the polygon area")


def _build_neighbors(n: int, tris: np.ndarray) -> np.ndarray:
    m = tris.shape[0]
    nbr = np.full((m, 3), -1, dtype=np.int32)
    owner = {}
    for t in range(m):
        for e in range(3):
            a = int(tris[t, e])
            b = int(tris[t, (e + 1) % 3])
            if (a, b) in owner:
                raise ValueError("duplicate directed edge in triangulation")
            owner[(a, b)] = (t, e)
    for (a, b), (t, e) in owner.items():
        other = owner.get((b, a))
        if other is not None:
            nbr[t, e] = other[0]
    return nbr


# -- monotone decomposition sweep -------------------------------------------


def _triangulate_monotone_pipeline(xs, ys) -> np.ndarray:
    n = len(xs)
    diagonals = _make_monotone(xs, ys)
    pieces = _split_faces(xs, ys, diagonals)
    out = np.empty((n - 2, 3), dtype=np.int32)
    nt = 0
    for piece in pieces:
        m = len(piece)
        if m < 3:
            raise ValueError("degenerate face from decomposition")
        tris = _triangulate_monotone_piece(xs, ys, piece)
        out[nt:nt + m - 2] = tris
        nt += m - 2
    if nt != n - 2:
        raise ValueError("decomposition lost triangles")
    return out


def _sweep_key(xs, ys, i: int) -> Tuple[float, float]:
    return (ys[i], -xs[i])


def _classify(xs, ys, n: int) -> np.ndarray:
    kx = np.asarray(ys)
    ky = -np.asarray(xs)
    vtype = np.empty(n, dtype=np.int8)
    for i in range(n):
        p = (i - 1) % n
        q = (i + 1) % n
        ki = (kx[i], ky[i])
        pb = (kx[p], ky[p]) < ki
        nb = (kx[q], ky[q]) < ki
        if pb and nb:
            cr = (xs[i] - xs[p]) * (ys[q] - ys[i]) \
                - (ys[i] - ys[p]) * (xs[q] - xs[i])
            vtype[i] = _START if cr >= 0.0 else _SPLIT
        elif not pb and not nb:
            cr = (xs[i] - xs[p]) * (ys[q] - ys[i]) \
                - (ys[i] - ys[p]) * (xs[q] - xs[i])
            vtype[i] = _END if cr >= 0.0 else _MERGE
        else:
            vtype[i] = _REGULAR
    return vtype


class _Status:
    """Sweep status: edges crossing the sweep line, ordered left to right."""

    __slots__ = ("xs", "ys", "edges", "y")

    def __init__(self, xs, ys):
        self.xs = xs
        self.ys = ys
        self.edges: List[int] = []
        self.y = 0.0

    def _x_at(self, e: int) -> float:
        n = len(self.xs)
        x1, y1 = self.xs[e], self.ys[e]
        x2, y2 = self.xs[(e + 1) % n], self.ys[(e + 1) % n]
        if y1 == y2:
            return 0.5 * (x1 + x2)
        t = (self.y - y1) / (y2 - y1)
        t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
        return x1 + t * (x2 - x1)

    def _bisect(self, qx: float) -> int:
        lo, hi = 0, len(self.edges)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._x_at(self.edges[mid]) < qx:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def insert(self, e: int, qx: float) -> None:
        self.edges.insert(self._bisect(qx), e)

    def find(self, e: int) -> int:
        pos = self._bisect(self._x_at(e))
        m = len(self.edges)
        for off in range(m + 1):
            lo = pos - off
            hi = pos + off
            if 0 <= lo < m and self.edges[lo] == e:
                return lo
            if hi != lo and 0 <= hi < m and self.edges[hi] == e:
                return hi
        raise DegenerateInput(f"edge {e} missing from sweep status")

    def remove(self, e: int) -> None:
        del self.edges[self.find(e)]

    def replace(self, old: int, new: int) -> None:
        self.edges[self.find(old)] = new

    def left_of(self, qx: float) -> int:
        pos = self._bisect(qx)
        if pos == 0:
            raise DegenerateInput("no sweep edge left of vertex")
        return self.edges[pos - 1]


def _make_monotone(xs, ys) -> List[Tuple[int, int]]:
    """Diagonals that partition the ring into monotone pieces."""
    n = len(xs)
    vtype = _classify(xs, ys, n)
    order = sorted(range(n), key=lambda i: (ys[i], -xs[i]), reverse=True)
    status = _Status(xs, ys)
    helper = {}
    diagonals: List[Tuple[int, int]] = []

    def add_diag(a: int, b: int) -> None:
        if b == (a + 1) % n or a == (b + 1) % n:
            raise DegenerateInput("decomposition diagonal lies on the boundary")
        diagonals.append((a, b))

    try:
        _run_sweep(xs, ys, n, vtype, order, status, helper, add_diag)
    except KeyError as exc:
        raise DegenerateInput(f"sweep helper missing: {exc}") from exc
    return diagonals


def _run_sweep(xs, ys, n, vtype, order, status, helper, add_diag) -> None:
    for v in order:
        status.y = ys[v]
        vx = xs[v]
        prev_e = (v - 1) % n
        t = vtype[v]
        if t == _START:
            status.insert(v, vx)
            helper[v] = v
        elif t == _END:
            h = helper[prev_e]
            if vtype[h] == _MERGE:
                add_diag(v, h)
            status.remove(prev_e)
        elif t == _SPLIT:
            j = status.left_of(vx)
            add_diag(v, helper[j])
            helper[j] = v
            status.insert(v, vx)
            helper[v] = v
        elif t == _MERGE:
            h = helper[prev_e]
            if vtype[h] == _MERGE:
                add_diag(v, h)
            status.remove(prev_e)
            j = status.left_of(vx)
            if vtype[helper[j]] == _MERGE:
                add_diag(v, helper[j])
            helper[j] = v
        else:
            p = (v - 1) % n
            q = (v + 1) % n
            descending = (ys[p], -xs[p]) > (ys[v], -xs[v]) > (ys[q], -xs[q])
            if descending:
                h = helper[prev_e]
                if vtype[h] == _MERGE:
                    add_diag(v, h)
                status.replace(prev_e, v)
                helper[v] = v
            else:
                j = status.left_of(vx)
                if vtype[helper[j]] == _MERGE:
                    add_diag(v, helper[j])
                helper[j] = v


def _split_faces(xs, ys, diagonals: Sequence[Tuple[int, int]]
                 ) -> List[List[int]]:
    """Interior faces of the ring plus diagonals, each CCW."""
    n = len(xs)
    if not diagonals:
        return [list(range(n))]
    out_edges = {v: [(v + 1) % n] for v in range(n)}
    seen = set()
    for a, b in diagonals:
        key = (min(a, b), max(a, b))
        if key in seen:
            continue
        seen.add(key)
        out_edges[a].append(b)
        out_edges[b].append(a)
    used = set()
    faces = []
    for start_v in range(n):
        for w0 in out_edges[start_v]:
            if (start_v, w0) in used:
                continue
            face = [start_v]
            u, v = start_v, w0
            used.add((u, v))
            while v != start_v:
                face.append(v)
                # next edge: sharpest counterclockwise turn from the
                # reversed arrival direction, avoiding an immediate U-turn
                ang_in = math.atan2(float(ys[u] - ys[v]), float(xs[u] - xs[v]))
                best = None
                best_ang = -1.0
                for w in out_edges[v]:
                    if (v, w) in used:
                        continue
                    if w == u and len(out_edges[v]) > 1:
                        continue
                    ang = math.atan2(float(ys[w] - ys[v]),
                                     float(xs[w] - xs[v])) - ang_in
                    ang %= 2.0 * math.pi
                    if ang <= 1e-15:
                        ang += 2.0 * math.pi
                    if ang > best_ang:
                        best_ang = ang
                        best = w
                if best is None:
                    raise DegenerateInput("face walk dead-ended")
                u, v = v, best
                used.add((u, v))
            if len(face) >= 3:
                faces.append(face)
    return faces


def _triangulate_monotone_piece(xs, ys, piece: List[int]) -> np.ndarray:
    m = len(piece)
    # rotate so the sweep order (y, -x) becomes plain lex (x', y')
    pxs = np.array([ys[i] for i in piece], dtype=np.float64)
    pys = np.array([-xs[i] for i in piece], dtype=np.float64)
    keys = [(pxs[k], pys[k]) for k in range(m)]
    bottom = min(range(m), key=lambda k: keys[k])
    top = max(range(m), key=lambda k: keys[k])
    side = np.ones(m, dtype=np.int8)
    k = bottom
    while True:
        side[k] = 0
        if k == top:
            break
        k = (k + 1) % m
    order = np.array(sorted(range(m), key=lambda k: keys[k]), dtype=np.int64)
    local = kernels.triangulate_monotone(pxs, pys, order, side)
    piece_arr = np.array(piece, dtype=np.int32)
    return piece_arr[local]


# -- ear clipping -------------------------------------------------------------


def _earclip_ring(points: List[Tuple[float, float]]) -> np.ndarray:
    """Ear-clipping triangulation of a CCW ring, exact predicates."""
    n = len(points)
    idx = list(range(n))
    tris = np.empty((n - 2, 3), dtype=np.int32)
    nt = 0

    def crossv(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def is_convex(k: int) -> bool:
        m = len(idx)
        a = points[idx[k - 1]]
        b = points[idx[k]]
        c = points[idx[(k + 1) % m]]
        return crossv(a, b, c) > 0.0

    def blocked(k: int) -> bool:
        m = len(idx)
        ia, ib, ic = idx[k - 1], idx[k], idx[(k + 1) % m]
        a, b, c = points[ia], points[ib], points[ic]
        for j in idx:
            if j in (ia, ib, ic):
                continue
            r = points[j]
            if crossv(a, b, r) >= 0.0 and crossv(b, c, r) >= 0.0 \
                    and crossv(c, a, r) >= 0.0:
                return True
        return False

    guard = 0
    while len(idx) > 3:
        m = len(idx)
        clipped = False
        for k in range(m):
            if not is_convex(k):
                continue
            if blocked(k):
                continue
            tris[nt] = (idx[k - 1], idx[k], idx[(k + 1) % m])
            nt += 1
            del idx[k]
            clipped = True
            break
        if not clipped:
            raise DegenerateInput("no ear found; ring may be degenerate")
        guard += 1
        if guard > n:
            raise DegenerateInput("ear clipping did not terminate")
    tris[nt] = (idx[0], idx[1], idx[2])
    nt += 1
    if nt != n - 2:
        raise ValueError("ear clipping produced wrong triangle count")
    return tris
