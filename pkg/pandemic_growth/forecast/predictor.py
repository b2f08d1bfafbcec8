"""
M-step forecasts from an anchor day.

The stacked state Y[k0] is built from actual data, the propagator L[k0] is
applied M times and each region's newest block is read back out. Gains stay
those of day k0 over the whole horizon unless relearning is requested.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..core.errors import HorizonTooLong, InsufficientHistory
from ..core.interfaces import IBetaSource
from ..dynamics.propagation import assemble_propagator, propagate_one_step
from ..dynamics.state import stack
from ..learning.learner import GainSet, LearningMode, LearningOptions, learn_gain_set
from ..timeseries.series import PandemicSeries, lagged_actives, window

logger = logging.getLogger(__name__)


@dataclass
class ForecastRun:
    """Predicted states for horizons 1..M; predictions[m-1] is day k0+m, shape (R, 3)"""
    k0: int
    horizon: int
    beta: float
    beta_mode: str
    predictions: np.ndarray
    gains_days: List[int] = field(default_factory=list)

    def at(self, m: int) -> np.ndarray:
        if not 1 <= m <= self.horizon:
            raise HorizonTooLong(f"Horizon {m} outside 1..{self.horizon}")
        return self.predictions[m - 1].copy()


def _check_horizon(horizon: int, n_tau: int):
    if horizon < 1:
        raise HorizonTooLong(f"Horizon must be >= 1, got {horizon}")
    if horizon > n_tau:
        raise HorizonTooLong(f"Horizon {horizon} exceeds the lag depth n_tau={n_tau}")


def predict_m_step(
    series: PandemicSeries,
    k0: int,
    horizon: int,
    gains: GainSet,
    beta_source: IBetaSource,
) -> ForecastRun:
    """Forecast days k0+1..k0+horizon with L[k0] held fixed"""
    n_tau = gains.g_full.n_tau
    _check_horizon(horizon, n_tau)
    if k0 < n_tau:
        raise InsufficientHistory(f"Anchor day {k0} has no full window", minimum_day=n_tau)

    beta = beta_source.beta_for(series, k0)
    propagator = assemble_propagator(gains.g_diag, gains.g_full, beta)
    state = stack(window(series, k0, n_tau), k0)

    predictions = np.empty((horizon, series.n_regions, 3))
    for m in range(horizon):
        state = propagator.apply(state)
        predictions[m] = state.newest()

    return ForecastRun(
        k0=k0,
        horizon=horizon,
        beta=beta,
        beta_mode=beta_source.describe(),
        predictions=predictions,
        gains_days=[gains.day] * horizon,
    )


def predict_relearning(
    series: PandemicSeries,
    k0: int,
    horizon: int,
    mode: LearningMode,
    opts: LearningOptions,
    beta_source: IBetaSource,
    gains: Optional[GainSet] = None,
) -> ForecastRun:
    """Experimental: relearn gains after every step on the series extended by the forecast"""
    _check_horizon(horizon, opts.n_tau)
    tape = series.truncated(k0)
    beta = beta_source.beta_for(tape, k0)
    gains = gains or learn_gain_set(tape, k0, mode, opts)

    predictions = np.empty((horizon, series.n_regions, 3))
    days = []
    for m in range(horizon):
        k = k0 + m
        if m > 0:
            gains = learn_gain_set(tape, k, mode, opts)
        history = lagged_actives(window(tape, k, opts.n_tau))
        predictions[m] = propagate_one_step(tape.states(k), history, gains.g_full, beta, g_diag=gains.g_diag)
        days.append(gains.day)
        tape = tape.extended(predictions[m])

    return ForecastRun(
        k0=k0,
        horizon=horizon,
        beta=beta,
        beta_mode=beta_source.describe(),
        predictions=predictions,
        gains_days=days,
    )
