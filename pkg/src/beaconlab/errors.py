"""Exception taxonomy shared by every module in the package."""


class BeaconError(Exception):
    """Base class for all domain errors raised by this package."""


class DegenerateInput(BeaconError):
    """Input is degenerate (zero-length direction, non-finite coordinate, ...)."""


class TooFewVertices(BeaconError):
    """A polygon needs at least three vertices."""


class DuplicateVertex(BeaconError):
    """Two polygon vertices coincide within tolerance."""


class SelfIntersecting(BeaconError):
    """Two non-adjacent polygon edges intersect.

    Carries the offending edge index pair when known.
    """

    def __init__(self, msg, edges=None):
        super().__init__(msg)
        self.edges = edges


class NotReflex(BeaconError):
    """Operation requires a reflex vertex."""


class PointOutsidePolygon(BeaconError):
    """A query point lies strictly outside the polygon."""


class RayExitsImmediately(BeaconError):
    """A ray shot from the boundary leaves the polygon without entering it."""


class ChordExitsPolygon(BeaconError):
    """A chord's interior is not contained in the closed polygon."""


class BudgetExceeded(BeaconError):
    """Trajectory simulation exceeded its event budget without terminating."""


class DegenerateOnBoundary(BeaconError):
    """Case classification hit an exact boundary configuration."""


class DegenerateSlopes(BeaconError):
    """Line slopes are unusable for the staircase construction."""


class CertificationFailed(BeaconError):
    """A generated instance failed its built-in certificate."""
