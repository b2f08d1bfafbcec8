"""
Gain learning for one anchor day: build the regression problems, solve each
with NNLS and assemble the solutions into a GainTensor.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.errors import ConfigurationError
from ..dynamics.gains import GainTensor
from ..timeseries.series import CHANNELS, PandemicSeries
from .nnls import NnlsSolution, solve_nnls
from .problems import build_interstate_problems, build_quarantined_problems, first_learnable_day

logger = logging.getLogger(__name__)


class LearningMode(str, Enum):
    QUARANTINED = "quarantined"
    INTERSTATE = "interstate"
    BLENDED = "blended"


@dataclass
class LearningOptions:
    """Window, weighting and solver settings for gain learning"""
    n_tau: int = 14
    fit_days: Optional[int] = None
    weights: Dict[str, float] = field(default_factory=lambda: {name: 1.0 for name in CHANNELS})
    ridge: float = 0.0
    tol: float = 1e-10
    max_iter: Optional[int] = None

    @property
    def window(self) -> int:
        """Effective fit window W_f (defaults to n_tau)"""
        return self.fit_days if self.fit_days is not None else self.n_tau

    @property
    def first_day(self) -> int:
        return first_learnable_day(self.n_tau, self.window)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_tau": self.n_tau,
            "fit_days": self.window,
            "weights": dict(sorted(self.weights.items())),
            "ridge": self.ridge,
            "nnls": {"tol": self.tol, "max_iter": self.max_iter},
        }


@dataclass
class LearningDiagnostics:
    """Solver flags aggregated over one learned day"""
    problems: int = 0
    ill_conditioned: int = 0
    not_converged: int = 0
    underdetermined: int = 0
    max_kkt_violation: float = 0.0
    max_iterations: int = 0

    def record(self, solution: NnlsSolution, underdetermined: bool):
        self.problems += 1
        self.ill_conditioned += int(solution.ill_conditioned)
        self.not_converged += int(not solution.converged)
        self.underdetermined += int(underdetermined)
        self.max_kkt_violation = max(self.max_kkt_violation, solution.kkt_violation)
        self.max_iterations = max(self.max_iterations, solution.iterations)

    def merge(self, other: "LearningDiagnostics"):
        self.problems += other.problems
        self.ill_conditioned += other.ill_conditioned
        self.not_converged += other.not_converged
        self.underdetermined += other.underdetermined
        self.max_kkt_violation = max(self.max_kkt_violation, other.max_kkt_violation)
        self.max_iterations = max(self.max_iterations, other.max_iterations)

    @property
    def has_warnings(self) -> bool:
        return bool(self.not_converged or self.underdetermined)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "problems": self.problems,
            "ill_conditioned": self.ill_conditioned,
            "not_converged": self.not_converged,
            "underdetermined": self.underdetermined,
            "max_kkt_violation": self.max_kkt_violation,
            "max_iterations": self.max_iterations,
        }


@dataclass(frozen=True)
class GainSet:
    """Quarantined and interstate gains learned for one day"""
    day: int
    g_diag: GainTensor
    g_full: GainTensor
    mode: LearningMode


def learn_gains(
    series: PandemicSeries,
    k: int,
    mode: LearningMode = LearningMode.QUARANTINED,
    opts: Optional[LearningOptions] = None,
    diagnostics: Optional[LearningDiagnostics] = None,
) -> GainTensor:
    """Learn the gain tensor of day k from days <= k only"""
    mode = LearningMode(mode)
    if mode is LearningMode.BLENDED:
        raise ConfigurationError("learn_gains takes a single mode; use learn_gain_set for blended learning")
    opts = opts or LearningOptions()
    diagnostics = diagnostics if diagnostics is not None else LearningDiagnostics()

    builder = build_quarantined_problems if mode is LearningMode.QUARANTINED else build_interstate_problems
    problems = builder(series, k, opts.n_tau, opts.window, opts.weights, opts.ridge)

    n_regions, n_tau = series.n_regions, opts.n_tau
    values = np.zeros((n_regions, n_regions, n_tau, 3))
    for i, per_channel in enumerate(problems):
        for c, problem in enumerate(per_channel):
            solution = solve_nnls(problem, opts.tol, opts.max_iter)
            diagnostics.record(solution, problem.underdetermined)
            if mode is LearningMode.QUARANTINED:
                values[i, i, :, c] = solution.x
            else:
                values[i, :, :, c] = solution.x.reshape(n_regions, n_tau)

    if diagnostics.not_converged:
        logger.warning(f"Day {k}: {diagnostics.not_converged} NNLS problems hit max_iter")
    if diagnostics.ill_conditioned:
        logger.debug(f"Day {k}: {diagnostics.ill_conditioned}/{diagnostics.problems} designs ill-conditioned")

    gains = GainTensor(values, day=k, mode=mode.value)
    return gains


def learn_gain_set(
    series: PandemicSeries,
    k: int,
    mode: LearningMode = LearningMode.QUARANTINED,
    opts: Optional[LearningOptions] = None,
    diagnostics: Optional[LearningDiagnostics] = None,
) -> GainSet:
    """Gains for both blend endpoints.

    Quarantined mode reuses the diagonal gains for the interstate endpoint and
    interstate mode takes its own diagonal as the quarantined endpoint.
    """
    mode = LearningMode(mode)
    diagnostics = diagnostics if diagnostics is not None else LearningDiagnostics()
    if mode is LearningMode.QUARANTINED:
        g_diag = learn_gains(series, k, LearningMode.QUARANTINED, opts, diagnostics)
        return GainSet(k, g_diag, g_diag, mode)
    if mode is LearningMode.INTERSTATE:
        g_full = learn_gains(series, k, LearningMode.INTERSTATE, opts, diagnostics)
        return GainSet(k, g_full.restricted_to_diagonal(), g_full, mode)
    g_diag = learn_gains(series, k, LearningMode.QUARANTINED, opts, diagnostics)
    g_full = learn_gains(series, k, LearningMode.INTERSTATE, opts, diagnostics)
    return GainSet(k, g_diag, g_full, mode)
