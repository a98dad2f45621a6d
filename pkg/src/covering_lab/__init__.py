"""Covering systems of congruences: exact verification, the distortion method,
and rigorous evaluation of explicit analytic constants."""

from .congruence import (
    Congruence,
    CoveringSystem,
    ScanBudgetError,
    SystemFormatError,
    covered_density,
    delta,
    is_covering,
    is_distinct,
    is_exact,
    lcm_moduli,
    min_modulus,
    reciprocal_sum,
    smooth_reciprocal_mass,
)
from .report import LemmaReport
from .rigorous import RigorousReal

__version__ = "0.1.0"

__all__ = [
    "Congruence",
    "CoveringSystem",
    "LemmaReport",
    "RigorousReal",
    "ScanBudgetError",
    "SystemFormatError",
    "covered_density",
    "delta",
    "is_covering",
    "is_distinct",
    "is_exact",
    "lcm_moduli",
    "min_modulus",
    "reciprocal_sum",
    "smooth_reciprocal_mass",
]
