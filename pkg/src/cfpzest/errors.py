"""Exception hierarchy shared by every module.

The CLI maps each family onto an exit code, so library code raises these
rather than bare ``ValueError``.
"""


class CfpError(Exception):
    """Base class for all library errors."""


class ValidationError(CfpError, ValueError):
    """Input data violates a structural axiom."""


class CapacityError(CfpError):
    """A brute-force search would exceed its configured bound."""


class MathematicalFailure(CfpError):
    """A well-posed construction has no solution (obstructed, not condensable, ...)."""


class NotCondensable(MathematicalFailure):
    pass


class Obstructed(MathematicalFailure):
    pass


class InvariantViolation(CfpError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
