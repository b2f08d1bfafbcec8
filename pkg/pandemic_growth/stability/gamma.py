"""
Active-case growth coefficients gamma_h = omega_h - lambda_h - theta_h and the
scalar difference equation they drive:

    a[k+1] = (1 + gamma_1) a[k] + gamma_2 a[k-1] + ... + gamma_n a[k-n+1]
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..core.errors import DimensionMismatch
from ..dynamics.gains import GainTensor, IndexKey
from ..timeseries.series import ACTIVE_ROW


@dataclass(frozen=True)
class GammaCoefficients:
    """gamma[h-1] for lags h = 1..n_tau"""
    gamma: np.ndarray
    scope: str
    day: Optional[int] = None

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=np.float64).reshape(-1)
        if gamma.size < 1:
            raise DimensionMismatch("Need at least one gamma coefficient")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)

    @property
    def n_tau(self) -> int:
        return self.gamma.shape[0]


def gamma_from_gains(g: GainTensor, region: IndexKey = 1, scope: Union[str, None] = None) -> GammaCoefficients:
    """Self-gain gammas of one region (region 1 of an aggregate series for the national scope)"""
    gamma = g.self_gains(region) @ ACTIVE_ROW
    label = scope if scope is not None else str(getattr(region, "code", region))
    return GammaCoefficients(gamma=gamma, scope=label, day=g.day)


def simulate_active_cases(gamma: Union[GammaCoefficients, np.ndarray], initial: np.ndarray, n_steps: int) -> np.ndarray:
    """Run the difference equation from an oldest-first seed of n_tau actives.

    Returns the seed followed by `n_steps` new values.
    """
    coefficients = gamma.gamma if isinstance(gamma, GammaCoefficients) else np.asarray(gamma, dtype=np.float64)
    n_tau = coefficients.shape[0]
    initial = np.asarray(initial, dtype=np.float64).reshape(-1)
    if initial.shape[0] != n_tau:
        raise DimensionMismatch(f"Seed must hold {n_tau} actives, got {initial.shape[0]}")

    actives = np.empty(n_tau + n_steps)
    actives[:n_tau] = initial
    for k in range(n_tau, n_tau + n_steps):
        lagged = actives[k - n_tau:k][::-1]
        actives[k] = actives[k - 1] + coefficients @ lagged
    return actives
