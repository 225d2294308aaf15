"""Exception hierarchy.

Everything raised on purpose by this package derives from CircSymError so
callers can catch one type. DomainError subclasses ValueError because most
of them are plain bad-argument situations.
"""


class CircSymError(Exception):
    """Base class for all errors raised by circsym."""


class DomainError(CircSymError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SummaryError(DomainError):
    """Pairwise summaries violate the Cauchy-Schwarz bound c^2 + s^2 <= nj*nk."""


class NotPsdError(DomainError):
    """A matrix that must be positive semidefinite has a negative eigenvalue
    beyond the allowed tolerance."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ClosedFormError(DomainError):
    """No closed form exists for the requested kernel; use the quadrature path."""


class CostGuardError(DomainError):
    """Input exceeds the size limits of a deliberately brute-force routine."""


class NumericError(CircSymError):
    """A numeric routine failed to reach its accuracy contract."""


class ParseError(CircSymError, ValueError):
    """An input file could not be parsed."""

    def __init__(self, message, row=None, column=None):
        if row is not None:
            message = f"{message} (row {row}" + (
                f", column {column})" if column is not None else ")"
            )
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigError(ParseError):
    """A study configuration file is invalid."""
