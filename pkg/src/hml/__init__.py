"""Numerical toolkit for Hankel measures on the unit disk.

Moments of radial and disk measures, analytic-function norms, finite
Hankel sections, boundedness criteria and reproducible experiments.
"""

from .measure import (AtomList, DiskDensityMeasure, Lebesgue, MomentSequence, PowerWeight,
                      conjugate_moments, moment_sequence)
from .hankel import HankelOperator, operator_norm_dalpha, operator_norm_h2

__all__ = [
    "AtomList", "DiskDensityMeasure", "Lebesgue", "MomentSequence", "PowerWeight",
    "conjugate_moments", "moment_sequence", "HankelOperator", "operator_norm_dalpha",
    "operator_norm_h2",
]
__version__ = "0.1.0"
