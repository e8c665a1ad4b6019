"""Exception types shared across the library."""


class DynamoError(Exception):
    """Base class for all library errors."""


class ZeroPoint(DynamoError):
    """Both homogeneous coordinates are zero."""


class DegenerateMap(DynamoError):
    """The homogeneous lift has resultant 0 and does not define a morphism."""


class OverflowPolicy(DynamoError):
    """Exact coefficient or coordinate size exceeded the configured cap."""


class RootFindingFailure(DynamoError):
    """Complex root iteration failed to converge to the requested tolerance."""


class CapExceeded(DynamoError):
    """A configured work cap (period degree, iteration count) was exceeded."""


class NotACycle(DynamoError):
    """The supplied points are not permuted cyclically by the map."""


class SingularCurve(DynamoError):
    """The Weierstrass curve is singular (discriminant zero)."""


class AmbiguousCollision(DynamoError):
    """Two orbit points are suspiciously close but not certifiably equal."""


class Inconclusive(DynamoError):
    """Classification could not be decided because the portrait was ambiguous."""


class DegenerateFiber(DynamoError):
    """A fiber polynomial vanished identically."""


class EliminationFailure(DynamoError):
    """Resultant elimination produced a form that failed point verification."""


class InsufficientPreperiodicSupply(DynamoError):
    """A map has too few rational preperiodic points for the requested trials."""
