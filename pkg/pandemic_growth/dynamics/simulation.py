"""
Forward simulation of the conservation-law model from planted gains.
"""

from typing import Optional

import numpy as np

from ..core.errors import DimensionMismatch
from ..timeseries.registry import DayCalendar, RegionRegistry
from ..timeseries.series import PandemicSeries, lagged_actives
from .gains import GainTensor
from .propagation import blended_inputs


def simulate_series(
    initial: np.ndarray,
    g_full: GainTensor,
    beta: float,
    n_days: int,
    registry: RegionRegistry,
    calendar: DayCalendar,
    g_diag: Optional[GainTensor] = None,
    recoveries_synthetic: bool = False,
) -> PandemicSeries:
    """Extend an oldest-first (R, n_tau, 3) seed window by `n_days` simulated days.

    Days 1..n_tau of the result are the seed; gains stay fixed throughout.
    """
    initial = np.asarray(initial, dtype=np.float64)
    if initial.shape != (g_full.n_regions, g_full.n_tau, 3):
        raise DimensionMismatch(
            f"Seed window must be (R={g_full.n_regions}, n_tau={g_full.n_tau}, 3), got {initial.shape}"
        )
    if len(registry) != g_full.n_regions:
        raise DimensionMismatch("Registry size does not match the gain tensor")

    g_diag = g_diag if g_diag is not None else g_full
    n_tau = g_full.n_tau
    totals = np.empty((g_full.n_regions, n_tau + n_days, 3))
    totals[:, :n_tau] = initial
    for k in range(n_tau, n_tau + n_days):
        history = lagged_actives(totals[:, k - n_tau:k])
        totals[:, k] = totals[:, k - 1] + blended_inputs(g_diag, g_full, beta, history)
    return PandemicSeries(registry, calendar, totals, recoveries_synthetic)
