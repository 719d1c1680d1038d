"""Pure Python / numpy implementations of the hot kernels.

The compiled extension in _kernels.pyx mirrors these signatures exactly;
beaconlab.kernels picks whichever is importable. Inputs are numpy float64
arrays holding the polygon vertex ring (xs[i], ys[i]) in CCW order.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"


def signed_area(xs, ys):
    """Twice the signed area of the ring, positive for CCW."""
    x2 = np.roll(xs, -1)
    y2 = np.roll(ys, -1)
    return float(np.dot(xs, y2) - np.dot(x2, ys))


def ray_edge_hits(xs, ys, ox, oy, dx, dy):
    """Ray/edge intersection parameters against every polygon edge.

    Solves origin + s*dir = v_i + t*(v_{i+1} - v_i) for each edge i.
    Returns (s, t) arrays; entries are +inf where the ray is parallel to
    the edge. No range filtering is applied here.
    """
    ex = np.roll(xs, -1) - xs
    ey = np.roll(ys, -1) - ys
    denom = dx * ey - dy * ex
    wx = xs - ox
    wy = ys - oy
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (wx * ey - wy * ex) / denom
        t = (wx * dy - wy * dx) / denom
    bad = denom == 0.0
    if bad.any():
        s = np.where(bad, np.inf, s)
        t = np.where(bad, np.inf, t)
    return s, t


def min_edge_distance(xs, ys, x, y):
    """Distance from (x, y) to the nearest point of the boundary ring."""
    x2 = np.roll(xs, -1)
    y2 = np.roll(ys, -1)
    ex = x2 - xs
    ey = y2 - ys
    L2 = ex * ex + ey * ey
    with np.errstate(divide="ignore", invalid="ignore"):
        t = ((x - xs) * ex + (y - ys) * ey) / L2
    t = np.where(L2 == 0.0, 0.0, np.clip(t, 0.0, 1.0))
    qx = xs + t * ex - x
    qy = ys + t * ey - y
    return float(np.sqrt(np.min(qx * qx + qy * qy)))


def point_locate(xs, ys, x, y, eps):
    """Locate (x, y) relative to the ring: 1 interior, 0 boundary, -1 exterior.

    Points within eps of the boundary report 0; elsewhere an even-odd
    crossing count decides.
    """
    if min_edge_distance(xs, ys, x, y) <= eps:
        return 0
    y1 = ys
    y2 = np.roll(ys, -1)
    x1 = xs
    x2 = np.roll(xs, -1)
    straddle = (y1 > y) != (y2 > y)
    if not straddle.any():
        return -1
    xs_c = x1[straddle] + (y - y1[straddle]) * (x2[straddle] - x1[straddle]) \
        / (y2[straddle] - y1[straddle])
    inside = int(np.count_nonzero(xs_c > x)) & 1
    return 1 if inside else -1


def triangulate_monotone(xs, ys, order, side):
    """Two-chain triangulation of an x-monotone ring.

    order lists vertex indices from the leftmost to the rightmost vertex in
    a lexicographic sweep order under which both chains are strictly
    increasing; side[v] is 0 on the lower chain, 1 on the upper chain
    (endpoints may carry either). Returns an (n-2, 3) int32 array of CCW
    triangles in the given vertex indices.
    """
    n = len(order)
    tris = np.empty((n - 2, 3), dtype=np.int32)
    nt = 0
    stack = [int(order[0]), int(order[1])]
    for k in range(2, n):
        v = int(order[k])
        vx, vy = xs[v], ys[v]
        if k == n - 1 or side[v] != side[stack[-1]]:
            # v sees every stack vertex: fan off consecutive pairs
            prev_top = stack[-1]
            while len(stack) >= 2:
                b = stack.pop()
                a = stack[-1]
                ax, ay = xs[a], ys[a]
                cr = (xs[b] - ax) * (vy - ay) - (ys[b] - ay) * (vx - ax)
                if cr >= 0.0:
                    tris[nt] = (a, b, v)
                else:
                    tris[nt] = (b, a, v)
                nt += 1
            stack = [prev_top, v]
        else:
            # same chain: cut convex corners while the diagonal stays inside
            last = stack.pop()
            lower = side[v] == 0
            while stack:
                a = stack[-1]
                ax, ay = xs[a], ys[a]
                cr = (xs[last] - ax) * (vy - ay) - (ys[last] - ay) * (vx - ax)
                if lower:
                    if cr <= 0.0:
                        break
                    tris[nt] = (a, last, v)
                else:
                    if cr >= 0.0:
                        break
                    tris[nt] = (last, a, v)
                nt += 1
                last = stack.pop()
            stack.append(last)
            stack.append(v)
    if nt != n - 2:
        raise ValueError("monotone triangulation produced %d of %d triangles"
                         % (nt, n - 2))
    return tris
