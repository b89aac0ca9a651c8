"""Error taxonomy shared by the library and the command line.

Precondition failures are ``ValueError`` subclasses; internal traps are
``RuntimeError`` subclasses. The CLI maps the two families to exit codes 3 and 4
(``BodyFileError`` maps to 2).
"""


class PreconditionError(ValueError):
    """An input does not satisfy the documented precondition of an operation."""


class ParallelEdges(PreconditionError):
    """The polygon has a pair of parallel edges."""


class CentrallySymmetric(PreconditionError):
    """The operation needs a body that is not centrally symmetric."""


class RadiusTooSmall(PreconditionError):
    """Arc radius below the minimum admissible radius of the polygon."""


class NonConvexInput(PreconditionError):
    """Vertex cycle is not strictly convex and counterclockwise."""


class BodyFileError(PreconditionError):
    """A body description file could not be parsed."""


class InternalInvariantError(RuntimeError):
    """A verified search or a hard assertion failed. Always a bug trap."""


class ApproximationFailure(InternalInvariantError):
    """No verified sandwich polygon was found within the retry schedule."""


class SearchExhausted(InternalInvariantError):
    """The cut parameter search ran out of candidates."""


class InvariantRegression(InternalInvariantError):
    """A cut did not increase the hull vertex count of the hedgehog."""


class RadiusScheduleExhausted(InternalInvariantError):
    """Arc smoothing never reproduced the polygon's hull vertex count."""


class HullInvariantViolation(InternalInvariantError):
    """A hull vertex failed the convexity test or a weak corner became a hull vertex."""
