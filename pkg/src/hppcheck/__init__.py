"""Exact certification of the half-plane / strong Rayleigh property.

Core pieces: exact rational polynomial arithmetic, matroids given by
explicit bases, Rayleigh differences and their quadratic decomposition,
sum-of-squares certificate verification, a recursive strong-Rayleigh
checker, a numerical SOS search with exact re-verification, and a
randomized falsifier.
"""

from hppcheck.polynomial import (
    GroundSetMismatchError,
    Polynomial,
    PolynomialParseError,
    format_polynomial,
    parse_polynomial,
)

__all__ = [
    "GroundSetMismatchError",
    "Polynomial",
    "PolynomialParseError",
    "format_polynomial",
    "parse_polynomial",
]

__version__ = "0.1.0"
