"""Exact computations with right-symmetric Witt algebras.

Polynomial identities (standard right-symmetric identities, minimal degrees,
identity spaces), left centers and normalizers, shuffle and cup products of
standard cochains, and order-by-order deformations of the rank-one algebra.
"""

from .exponent import ExponentDomain
from .scalar import GF, QQ, SeriesRing, TruncatedSeries
from .witt import WittAlgebra, WittElement, associator, bracket, circ, star

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "ExponentDomain",
    "SeriesRing",
    "TruncatedSeries",
    "WittAlgebra",
    "WittElement",
    "associator",
    "bracket",
    "circ",
    "star",
]
