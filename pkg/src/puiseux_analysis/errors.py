"""
================================================================================
CONTEXT BLOCK
================================================================================
File: errors.py
Module: puiseux_analysis.errors
Purpose: Exception hierarchy shared by every analysis layer

Description:
    All failures raised by the library derive from PuiseuxError so that the
    command-line front end and the tool server can translate them into exit
    codes and error payloads in one place.

    Two families matter to callers:
    - Precision problems (AmbiguousZeroError, UnresolvedRootCluster) are
      retried with more bits by algebra.escalating() and end up reported
      as "inconclusive" when the maximum precision does not settle them.
    - Everything else is a definite computation or input error.

Created: 2025-12-14
================================================================================
"""

from typing import Optional


class PuiseuxError(Exception):
    """Base class for all analysis errors."""


class PolynomialSyntaxError(PuiseuxError):
    """Raised when polynomial text does not match the input grammar."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class ZeroInputError(PuiseuxError):
    """Raised when an operation receives the zero polynomial."""

    def __init__(self, message: str = "zero input"):
        super().__init__(message)


class MiniRegularityError(PuiseuxError):
    """Raised when a polynomial is not mini-regular in the expansion variable."""


class TruncationError(PuiseuxError):
    """Raised when stored series terms do not reach far enough to decide."""

    def __init__(self, message: str = "truncation too short"):
        super().__init__(message)


class AmbiguousZeroError(PuiseuxError):
    """Raised when a ball straddles zero and is too wide to be neglected."""


class UnresolvedRootCluster(PuiseuxError):
    """Raised when root clusters stay unresolved; surfaces as inconclusive."""

    def __init__(self, message: str = "unresolved root cluster"):
        super().__init__(message)


class PreconditionError(PuiseuxError):
    """Raised when an operation is called outside its documented domain."""


class InvariantViolation(PuiseuxError):
    """Internal error: a mathematical invariant failed to hold."""


def is_inconclusive(exc: Optional[BaseException]) -> bool:
    """
    Classify an exception as an inconclusive outcome.

    Args:
        exc: Exception raised by an analysis call

    Returns:
        True when the failure is a precision/cluster problem rather than a
        definite error
    """
    return isinstance(exc, (UnresolvedRootCluster, AmbiguousZeroError))
