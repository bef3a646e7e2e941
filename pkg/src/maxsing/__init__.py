"""Exact arithmetic for the method of maximal singularities."""

from .errors import (
    DegenerateGraph,
    DegenerateResult,
    IndexOutOfRange,
    InfinitelyNearObstruction,
    InvariantViolation,
    LengthMismatch,
    MalformedInput,
    MaxsingError,
    NotCompatible,
    PreconditionFailed,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateGraph",
    "DegenerateResult",
    "IndexOutOfRange",
    "InfinitelyNearObstruction",
    "InvariantViolation",
    "LengthMismatch",
    "MalformedInput",
    "MaxsingError",
    "NotCompatible",
    "PreconditionFailed",
]
