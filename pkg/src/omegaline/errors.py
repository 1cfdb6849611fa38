"""Exception types shared across the package."""

from __future__ import annotations


class OmegalineError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(OmegalineError, ValueError):
    """A value violates a documented precondition."""


class DimensionError(OmegalineError, ValueError):
    """Digit vectors of mismatched rank were combined."""


class NotMaterializedError(OmegalineError):
    """A sample point is not present in the requested truncation.

    Carries ``minimal_n``, the smallest truncation index at which the point
    exists (and stays within the terminated length from then on).
    """

    def __init__(self, n: int, minimal_n: int):
        self.n = n
        self.minimal_n = minimal_n
        super().__init__(
            f"sample point not present in truncation n={n}; "
            f"first admissible truncation is n={minimal_n}"
        )


class RegimeError(OmegalineError):
    """The operation is not defined for this line regime."""


class DomainError(OmegalineError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConvergenceError(OmegalineError):
    """The reflection series does not converge for these arguments."""


class ConfigError(OmegalineError):
    """A run configuration file is invalid.

    ``location`` is a human-readable "file:line:col [section] key" prefix
    when the offending value is known.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
