"""Exception types raised by the billiard routines."""


class BilliardError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateBounce(BilliardError):
    """The ray hits a polygon vertex or an arc endpoint, where reflection is undefined."""


class OnCorner(BilliardError):
    """Boundary data requested at a corner of a non-smooth shape."""


class InsideShape(BilliardError):
    """A point is inside (or on) the shape, or cannot see it at all."""


class LeftVisibility(BilliardError):
    """An iterate left the visibility domain."""


class BounceOffSegment(BilliardError):
    """A segment state whose ray misses the segment [-1, 1]."""


class DegenerateOrbit(BilliardError):
    """Quantity undefined on the fixed-point family (w = d = 0)."""


class NotMonotone(BilliardError):
    """Curvature along an arc is not monotone."""


class PerturbationLeftDomain(BilliardError):
    """A finite-difference probe stepped outside the visibility domain."""


class SchemaError(BilliardError):
    """Scenario JSON does not match the schema; ``path`` names the offending key."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(BilliardError):
    """Scenario parameters are structurally valid but physically meaningless."""
