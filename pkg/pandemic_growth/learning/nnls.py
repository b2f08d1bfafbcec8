"""
Weighted non-negative least squares by the Lawson-Hanson active-set method.

Solves  min 1/2 (Ax - b)' diag(w) (Ax - b) + ridge/2 |x|^2  subject to x >= 0.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import DimensionMismatch

logger = logging.getLogger(__name__)

# Singular value ratio below which the design is reported ill-conditioned
PIVOT_RATIO = 1e-12


@dataclass(frozen=True)
class NnlsProblem:
    A: np.ndarray
    b: np.ndarray
    w: np.ndarray
    ridge: float = 0.0
    label: str = ""

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        b = np.asarray(self.b, dtype=np.float64).reshape(-1)
        w = np.asarray(self.w, dtype=np.float64).reshape(-1)
        m, n = A.shape
        if m < 1 or n < 1:
            raise DimensionMismatch(f"Design matrix must be at least 1x1, got {A.shape}")
        if b.shape[0] != m or w.shape[0] != m:
            raise DimensionMismatch(f"b and w must have length {m}, got {b.shape[0]} and {w.shape[0]}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(w))):
            raise DimensionMismatch("NNLS problem entries must be finite")
        if np.any(w <= 0):
            raise DimensionMismatch("Residual weights must be positive")
        if self.ridge < 0:
            raise DimensionMismatch("Ridge penalty must be non-negative")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "w", w)

    @property
    def shape(self):
        return self.A.shape

    @property
    def underdetermined(self) -> bool:
        return self.A.shape[0] < self.A.shape[1]

    def objective(self, x: np.ndarray) -> float:
        residual = self.A @ x - self.b
        return 0.5 * float(residual @ (self.w * residual)) + 0.5 * self.ridge * float(x @ x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.A.T @ (self.w * (self.A @ x - self.b)) + self.ridge * x


@dataclass(frozen=True)
class NnlsSolution:
    x: np.ndarray
    residual_norm: float
    kkt_violation: float
    iterations: int
    converged: bool = True
    ill_conditioned: bool = False
    objective: float = 0.0
    kkt_scale: float = 1.0


def kkt_violation(problem: NnlsProblem, x: np.ndarray, scale: float = 1.0) -> float:
    """Largest KKT violation, divided by `scale`"""
    grad = problem.gradient(x)
    free = x > 0
    violation = np.where(free, np.abs(grad), np.maximum(0.0, -grad))
    return float(violation.max()) / scale if violation.size else 0.0


def _augmented(problem: NnlsProblem):
    root_w = np.sqrt(problem.w)
    A = problem.A * root_w[:, None]
    b = problem.b * root_w
    if problem.ridge > 0:
        n = A.shape[1]
        A = np.vstack([A, np.sqrt(problem.ridge) * np.eye(n)])
        b = np.concatenate([b, np.zeros(n)])
    return A, b


def _is_ill_conditioned(A: np.ndarray) -> bool:
    m, n = A.shape
    if m < n:
        return True
    singular = np.linalg.svd(A, compute_uv=False)
    return singular[0] == 0.0 or singular[-1] < PIVOT_RATIO * singular[0]


def _passive_solve(A: np.ndarray, b: np.ndarray, passive: np.ndarray) -> np.ndarray:
    z = np.zeros(A.shape[1])
    if passive.any():
        z[passive] = np.linalg.lstsq(A[:, passive], b, rcond=None)[0]
    return z


def solve_nnls(problem: NnlsProblem, tol: float = 1e-10, max_iter: Optional[int] = None) -> NnlsSolution:
    """Return a KKT point of the weighted NNLS problem.

    Deterministic: ties in the entering coordinate go to the lowest index.
    On hitting `max_iter` the current iterate is returned with converged=False.
    """
    if tol <= 0:
        raise DimensionMismatch(f"Tolerance must be positive, got {tol}")
    A, b = _augmented(problem)
    n = A.shape[1]
    max_iter = max_iter if max_iter is not None else 10 * n

    # stopping rule is relative to the problem's own scale; the reported violation is absolute
    scale = max(1.0, float(np.linalg.norm(A)) * float(np.linalg.norm(b)))
    threshold = tol * scale

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    iterations = 0
    converged = True

    while True:
        descent = A.T @ (b - A @ x)
        candidates = ~passive & ~blocked
        if not candidates.any() or descent[candidates].max() <= threshold:
            break
        if iterations >= max_iter:
            converged = False
            break

        j = int(np.flatnonzero(candidates)[np.argmax(descent[candidates])])
        passive[j] = True
        iterations += 1

        z = _passive_solve(A, b, passive)
        if z[j] <= 0:
            # entering coordinate cannot move off the bound
            passive[j] = False
            blocked[j] = True
            continue
        blocked[:] = False

        while np.any(z[passive] <= 0):
            if iterations >= max_iter:
                converged = False
                break
            iterations += 1
            leaving = passive & (z <= 0)
            alpha = np.min(x[leaving] / (x[leaving] - z[leaving]))
            x = x + alpha * (z - x)
            passive &= x > 0
            x[~passive] = 0.0
            z = _passive_solve(A, b, passive)
        if not converged:
            break
        x = np.where(passive, z, 0.0)

    x = np.maximum(x, 0.0)
    residual = problem.A @ x - problem.b
    solution = NnlsSolution(
        x=x,
        residual_norm=float(np.sqrt(residual @ (problem.w * residual))),
        kkt_violation=kkt_violation(problem, x),
        iterations=iterations,
        converged=converged,
        ill_conditioned=_is_ill_conditioned(A),
        objective=problem.objective(x),
        kkt_scale=scale,
    )
    if not converged:
        logger.warning(f"NNLS {problem.label or ''} stopped at max_iter={max_iter} (kkt={solution.kkt_violation:.3g})")
    return solution
