"""
Per-(region, channel) regression problems on a trailing window.

Residual day kappa runs over k - fit_days + 1 .. k; its target is the clamped
increment total[kappa] - total[kappa - 1] and its regressors are the actual
actives a[kappa - h] for h = 1..n_tau.
"""

import logging
from typing import Dict, List, Optional

import numpy as np

from ..core.errors import InsufficientHistory, OutOfRange
from ..timeseries.series import CHANNELS, CleaningMode, PandemicSeries, increments
from .nnls import NnlsProblem

logger = logging.getLogger(__name__)

DEFAULT_WEIGHTS = {name: 1.0 for name in CHANNELS}


def first_learnable_day(n_tau: int, fit_days: int) -> int:
    return n_tau + fit_days


def _lag_index(k: int, n_tau: int, fit_days: int, horizon: int) -> np.ndarray:
    """0-based day positions of a[kappa - h], shape (fit_days, n_tau)"""
    if n_tau < 1 or fit_days < 1:
        raise OutOfRange(f"n_tau and fit_days must be >= 1, got {n_tau} and {fit_days}")
    minimum = first_learnable_day(n_tau, fit_days)
    if k < minimum:
        raise InsufficientHistory(f"Cannot learn gains at day {k}", minimum_day=minimum)
    if k > horizon:
        raise OutOfRange(f"Day {k} is beyond the last recorded day {horizon}")
    kappas = np.arange(k - fit_days + 1, k + 1)
    lags = np.arange(1, n_tau + 1)
    return kappas[:, None] - lags[None, :] - 1


def _targets(series: PandemicSeries, k: int, fit_days: int) -> np.ndarray:
    """(R, fit_days, 3) clamped increments of the residual days"""
    clamped = increments(series.truncated(k), CleaningMode.CLAMP).values
    # increments column k-2 is day k
    return clamped[:, k - fit_days - 1:k - 1]


def _channel_weights(weights: Optional[Dict[str, float]]) -> Dict[str, float]:
    merged = dict(DEFAULT_WEIGHTS)
    merged.update(weights or {})
    return merged


def build_quarantined_problems(
    series: PandemicSeries,
    k: int,
    n_tau: int,
    fit_days: int,
    weights: Optional[Dict[str, float]] = None,
    ridge: float = 0.0,
) -> List[List[NnlsProblem]]:
    """R x 3 problems with n_tau unknowns each (own lags only)"""
    index = _lag_index(k, n_tau, fit_days, series.horizon)
    actives = series.actives()
    targets = _targets(series, k, fit_days)
    weights = _channel_weights(weights)

    problems = []
    for region in series.registry:
        offset = region.index - 1
        design = actives[offset][index]
        problems.append([
            NnlsProblem(
                A=design,
                b=targets[offset, :, c],
                w=np.full(fit_days, weights[name]),
                ridge=ridge,
                label=f"quarantined k={k} {region.code}/{name}",
            )
            for c, name in enumerate(CHANNELS)
        ])
    return problems


def build_interstate_problems(
    series: PandemicSeries,
    k: int,
    n_tau: int,
    fit_days: int,
    weights: Optional[Dict[str, float]] = None,
    ridge: float = 0.0,
) -> List[List[NnlsProblem]]:
    """R x 3 problems with R * n_tau unknowns each; column (j, h) at j * n_tau + h - 1"""
    index = _lag_index(k, n_tau, fit_days, series.horizon)
    actives = series.actives()
    targets = _targets(series, k, fit_days)
    weights = _channel_weights(weights)

    n_regions = series.n_regions
    design = actives[:, index].transpose(1, 0, 2).reshape(fit_days, n_regions * n_tau)
    if fit_days < n_regions * n_tau:
        logger.debug(f"Interstate problems at k={k} are underdetermined ({fit_days} < {n_regions * n_tau})")

    problems = []
    for region in series.registry:
        offset = region.index - 1
        problems.append([
            NnlsProblem(
                A=design,
                b=targets[offset, :, c],
                w=np.full(fit_days, weights[name]),
                ridge=ridge,
                label=f"interstate k={k} {region.code}/{name}",
            )
            for c, name in enumerate(CHANNELS)
        ])
    return problems
