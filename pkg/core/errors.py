"""Exception hierarchy for the sojourn toolkit.

Every error also derives from the closest builtin, so callers that only
know about ``ValueError`` or ``ZeroDivisionError`` keep working.
"""


class SojournError(Exception):
    """Base class for all errors raised by this package."""


class ExactDivisionError(SojournError, ZeroDivisionError):
    """Division by an exact zero (scalar or singular matrix)."""


class SeriesDivisionError(SojournError, ArithmeticError):
    """A quotient of truncated series that is not a power series."""


class SeriesDomainError(SojournError, ValueError):
    """An operation outside its domain, e.g. sqrt with constant term != 1."""


class InvalidStateError(SojournError, ValueError):
    """Qubit state that is not normalized."""


class DegenerateMeasureError(SojournError, ValueError):
    """Normalization requested for a measure with zero total weight."""


class ParameterError(SojournError, ValueError):
    """Out-of-range or ill-typed parameter (negative depth, odd time, ...)."""
