"""Sharp Schwarz-Pick estimates for harmonic and pluriharmonic maps.

Evaluators for the sharp right-hand sides, extremal witnesses, gradient-of-norm
functionals, coefficient bounds, and Bohr-radius computations.
"""

from splab.errors import (
    AliasingError,
    BracketError,
    CapacityError,
    ConfigurationError,
    DegenerateDualError,
    DomainError,
    QuadratureError,
    SeriesFormatError,
    SplabError,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "BracketError",
    "CapacityError",
    "ConfigurationError",
    "DegenerateDualError",
    "DomainError",
    "QuadratureError",
    "SeriesFormatError",
    "SplabError",
    "__version__",
]
