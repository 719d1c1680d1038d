"""Shared fixtures: the small hand-checked polygons used across the suite."""

import math

import pytest

from beaconlab.polygon import SimplePolygon

# unit square scaled by 4, all convex
SQUARE = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]

# L-shape: the upper-left quadrant of the 4x4 square is removed;
# reflex corner at (2,2)
LPOLY = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (2.0, 4.0), (2.0, 2.0),
         (0.0, 2.0)]

# 8x6 box with a triangular spike cut into the left wall, tip at (3,3);
# the only reflex vertex is the tip (index 5)
SPIKE6 = [(0.0, 0.0), (8.0, 0.0), (8.0, 6.0), (0.0, 6.0), (0.0, 4.0),
          (3.0, 3.0), (0.0, 2.0)]


@pytest.fixture
def square():
    return SimplePolygon(SQUARE)


@pytest.fixture
def lpoly():
    return SimplePolygon(LPOLY)


@pytest.fixture
def spike6():
    return SimplePolygon(SPIKE6)


def ring_area(points):
    s = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def assert_ring_equal(actual, expected, tol=1e-9):
    """Compare vertex rings up to rotation (not reflection)."""
    assert len(actual) == len(expected), \
        f"ring size {len(actual)} != {len(expected)}"
    n = len(expected)
    for shift in range(n):
        if all(math.hypot(actual[(i + shift) % n][0] - expected[i][0],
                          actual[(i + shift) % n][1] - expected[i][1]) <= tol
               for i in range(n)):
            return
    raise AssertionError(f"rings differ beyond rotation:\n{actual}\n{expected}")


def star_polygon(seed, n_lo=6, n_hi=20):
    """Seeded random star-shaped polygon whose kernel contains the origin."""
    import numpy as np

    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    step = 2.0 * math.pi / n
    angles = (np.arange(n) + rng.uniform(0.15, 0.85, n)) * step
    radii = rng.uniform(1.0, 5.0, n)
    return SimplePolygon([(float(r * math.cos(a)), float(r * math.sin(a)))
                          for r, a in zip(radii, angles)])
