"""
Companion matrix of the active-case recursion and its eigenvalues, found as
roots of the characteristic polynomial with Aberth-Ehrlich iteration.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..core.errors import DimensionMismatch, NonConvergence
from .gamma import GammaCoefficients

logger = logging.getLogger(__name__)

# |p(z)| <= CERTIFICATE * max(1, |z|^n) for every accepted root
CERTIFICATE = 1e-6


@dataclass(frozen=True)
class RootResult:
    roots: np.ndarray
    magnitudes: np.ndarray
    residuals: np.ndarray
    iterations: int
    converged: bool

    @property
    def spectral_radius(self) -> float:
        return float(self.magnitudes[0]) if self.magnitudes.size else 0.0


def _coefficients(gamma: Union[GammaCoefficients, np.ndarray]) -> np.ndarray:
    return gamma.gamma if isinstance(gamma, GammaCoefficients) else np.asarray(gamma, dtype=np.float64).reshape(-1)


def companion_matrix(gamma: Union[GammaCoefficients, np.ndarray]) -> np.ndarray:
    """Ones on the super-diagonal, last row [gamma_n, ..., gamma_2, 1 + gamma_1]"""
    gamma = _coefficients(gamma)
    n = gamma.shape[0]
    if n < 1:
        raise DimensionMismatch("Companion matrix needs n_tau >= 1")
    matrix = np.eye(n, k=1)
    matrix[-1] = gamma[::-1]
    matrix[-1, -1] += 1.0
    return matrix


def characteristic_polynomial(gamma: Union[GammaCoefficients, np.ndarray]) -> np.ndarray:
    """Monic coefficients, highest degree first: z^n - (1+g1) z^(n-1) - g2 z^(n-2) - ... - gn"""
    gamma = _coefficients(gamma)
    coefficients = np.concatenate([[1.0], -gamma])
    coefficients[1] -= 1.0
    return coefficients


def companion_polynomial(matrix: np.ndarray) -> np.ndarray:
    """Characteristic polynomial read off the last row of a companion matrix"""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"Companion matrix must be square, got {matrix.shape}")
    return np.concatenate([[1.0], -matrix[-1, ::-1]])


def _horner(coefficients: np.ndarray, z: np.ndarray):
    """p(z) and p'(z) for highest-first coefficients"""
    value = np.full(z.shape, coefficients[0], dtype=np.complex128)
    derivative = np.zeros(z.shape, dtype=np.complex128)
    for c in coefficients[1:]:
        derivative = derivative * z + value
        value = value * z + c
    return value, derivative


def _initial_guesses(coefficients: np.ndarray) -> np.ndarray:
    n = coefficients.shape[0] - 1
    radius = max(abs(coefficients[-1]) ** (1.0 / n), 1e-3)
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _sorted(roots: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.round(roots.imag, 12), np.round(roots.real, 12), -np.round(np.abs(roots), 12)))
    return roots[order]


def polynomial_roots(coefficients: np.ndarray, tol: float = 1e-8, max_iter: int = 500, strict: bool = False) -> RootResult:
    """All roots of a monic real polynomial given highest-first"""
    coefficients = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    degree = coefficients.shape[0] - 1
    if degree < 1:
        raise DimensionMismatch("Polynomial must have degree >= 1")

    # exact zero roots are split off first
    trailing = 0
    while trailing < degree and coefficients[degree - trailing] == 0.0:
        trailing += 1
    reduced = coefficients[:coefficients.shape[0] - trailing]
    n = reduced.shape[0] - 1

    iterations = 0
    if n == 0:
        found = np.zeros(0, dtype=np.complex128)
    elif n == 1:
        found = np.array([-reduced[1] + 0j])
    else:
        found = _initial_guesses(reduced)
        step_tol = tol * 1e-4
        for iterations in range(1, max_iter + 1):
            value, derivative = _horner(reduced, found)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = value / derivative
                differences = found[:, None] - found[None, :]
                np.fill_diagonal(differences, 1.0)
                repulsion = (1.0 / differences).sum(axis=1) - 1.0
                step = ratio / (1.0 - ratio * repulsion)
            step = np.where(np.isfinite(step), step, 0.0)
            found = found - step
            if np.all(np.abs(step) <= step_tol * np.maximum(1.0, np.abs(found))):
                break

    roots = _sorted(np.concatenate([found, np.zeros(trailing, dtype=np.complex128)]))
    value, _ = _horner(coefficients, roots)
    residuals = np.abs(value)
    bound = CERTIFICATE * np.maximum(1.0, np.abs(roots) ** degree)
    converged = bool(np.all(residuals <= bound))

    result = RootResult(
        roots=roots,
        magnitudes=np.abs(roots),
        residuals=residuals,
        iterations=iterations,
        converged=converged,
    )
    if not converged:
        message = f"Root finder stopped after {iterations} iterations, max residual {residuals.max():.3g}"
        if strict:
            raise NonConvergence(message)
        logger.warning(message)
    return result


def eigen_magnitudes(companion: np.ndarray, tol: float = 1e-8, max_iter: int = 500, strict: bool = False) -> RootResult:
    """Eigenvalues of a companion matrix, magnitudes sorted descending"""
    return polynomial_roots(companion_polynomial(companion), tol, max_iter, strict)
