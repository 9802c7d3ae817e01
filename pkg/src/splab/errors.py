"""Exception types raised across the package."""


class SplabError(Exception):
    """Base class for all package errors."""


class DomainError(SplabError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class QuadratureError(SplabError, ArithmeticError):
    """The integrand produced a non-finite value at a quadrature node."""


class BracketError(SplabError, ValueError):
    """A root-finding bracket does not contain a sign change."""


class AliasingError(SplabError, ValueError):
    """Sampling grid too coarse for the requested coefficient degree."""


class DegenerateDualError(SplabError, ZeroDivisionError):
    """Dual vector requested for the zero vector."""


class CapacityError(SplabError, OverflowError):
    """A requested enumeration is too large to materialise."""


class ConfigurationError(SplabError, ValueError):
    """Inputs are incompatible with the hypotheses of the requested check."""


class SeriesFormatError(SplabError, ValueError):
    """A series file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
