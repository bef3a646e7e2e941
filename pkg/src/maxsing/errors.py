"""Exception hierarchy shared by all engines.

Two families matter to callers: malformed input (bad data, exit code 1 in
the CLI) and failed preconditions (well-formed data on which the arithmetic
has nothing to say, exit code 2).
"""


class MaxsingError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class MalformedInput(MaxsingError, ValueError):
    exit_code = 1


class LengthMismatch(MalformedInput):
    pass


class IndexOutOfRange(MalformedInput, IndexError):
    pass


class InvariantViolation(MalformedInput):
    """Data passed validation of its shape but breaks a derived identity."""


class PreconditionFailed(MaxsingError):
    pass


class DegenerateResult(PreconditionFailed):
    pass


class DegenerateGraph(PreconditionFailed):
    pass


class NotCompatible(PreconditionFailed):
    pass


class InfinitelyNearObstruction(PreconditionFailed):
    """A step needs a base point that is infinitely near another one.

    ``steps`` holds the partial factorization computed before the
    obstruction and ``obstruction`` the type at which it stopped.
    """

    def __init__(self, message, steps=(), obstruction=None):
        super().__init__(message)
        self.steps = list(steps)
        self.obstruction = obstruction
