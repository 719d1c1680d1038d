"""Beacon attraction geometry workbench.

Simple polygons, beacon-attraction trajectories, shortest-path maps and
inverse attraction regions, with a CLI front end under ``beaconlab``.
"""

from .errors import (
    BeaconError,
    BudgetExceeded,
    CertificationFailed,
    ChordExitsPolygon,
    DegenerateInput,
    DegenerateOnBoundary,
    DegenerateSlopes,
    DuplicateVertex,
    NotReflex,
    PointOutsidePolygon,
    RayExitsImmediately,
    SelfIntersecting,
    TooFewVertices,
)
from .geom import (
    CCW,
    COLLINEAR,
    CW,
    HalfPlane,
    Point2,
    Tolerance,
    Wedge,
    halfplane_intersection,
    orientation,
    orthogonal_projection,
    segment_intersection,
)

__version__ = "0.1.0"
