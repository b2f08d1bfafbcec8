"""
Stability domain - handles the active-case growth coefficients, the companion
matrix, its eigenvalue magnitudes and the per-day unit-disk verdict.
"""

from .gamma import GammaCoefficients, gamma_from_gains, simulate_active_cases
from .roots import (
    RootResult, characteristic_polynomial, companion_matrix, companion_polynomial, eigen_magnitudes,
    polynomial_roots,
)
from .timeline import DayStability, StabilityReport, analyse_day, stability_timeline, write_stability_reports

__all__ = [
    "GammaCoefficients", "gamma_from_gains", "simulate_active_cases",
    "RootResult", "characteristic_polynomial", "companion_matrix", "companion_polynomial",
    "eigen_magnitudes", "polynomial_roots",
    "DayStability", "StabilityReport", "analyse_day", "stability_timeline", "write_stability_reports",
]
