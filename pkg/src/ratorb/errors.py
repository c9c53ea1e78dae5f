"""Exception hierarchy shared by all ratorb modules."""


class RatorbError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatchError(RatorbError):
    """Arithmetic attempted between scalars with incompatible discriminants."""


class ParseError(RatorbError):
    """Expression syntax error; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class InvalidTransformError(RatorbError):
    """Degenerate Mobius transformation (ad - bc = 0)."""


class CapacityError(RatorbError):
    """A configurable resource ceiling (degree cap, height cap) was exceeded."""


class BudgetError(RatorbError):
    """A search or enumeration budget was exhausted."""


class PrecisionError(RatorbError):
    """Numeric certification failed at the maximum precision of the ladder."""


class TrackingError(PrecisionError):
    """Fiber tracking collapsed (step underflow or fiber collision)."""


class BadOrbifoldError(RatorbError):
    """Orbifold violates goodness (one mark, or two marks with distinct values)."""


class PreconditionError(RatorbError):
    """An operation's stated precondition does not hold for the given input."""


class UnsupportedSignatureError(RatorbError):
    """Universal covering requested for a signature outside the rational cases."""


class NonRationalCoveringError(RatorbError):
    """Universal covering requested for chi <= 0 (not realizable rationally)."""


class ReconstructionError(RatorbError):
    """Numeric existence was claimed but exact reconstruction failed to verify."""
