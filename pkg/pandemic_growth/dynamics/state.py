"""
State vectors and the stacked (companion) history.

Stacking is region-major; inside each region block the days run oldest
first, so region i (0-based offset) and lag offset m live at
i * 3 * n_tau + 3 * m.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import DimensionMismatch, OutOfRange


@dataclass(frozen=True)
class StateVector:
    """Estimated cumulative totals of one region on one day"""
    t: float
    d: float
    r: float

    def __post_init__(self):
        if not all(np.isfinite([self.t, self.d, self.r])):
            raise DimensionMismatch("State vector components must be finite")

    @property
    def active(self) -> float:
        return self.t - self.d - self.r

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.d, self.r], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "StateVector":
        t, d, r = (float(v) for v in values)
        return cls(t, d, r)


@dataclass(frozen=True)
class StackedState:
    """Flattened history of n_tau days for all regions"""
    y: np.ndarray
    n_regions: int
    n_tau: int
    day: Optional[int] = None

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64).reshape(-1)
        expected = 3 * self.n_tau * self.n_regions
        if y.shape[0] != expected:
            raise DimensionMismatch(f"Stacked state must have length {expected}, got {y.shape[0]}")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    def offset(self, region: int, m: int) -> int:
        """Position of (0-based region, 0-based lag offset m) in y"""
        if not 0 <= region < self.n_regions:
            raise OutOfRange(f"Region offset {region} outside 0..{self.n_regions - 1}")
        if not 0 <= m < self.n_tau:
            raise OutOfRange(f"Lag offset {m} outside 0..{self.n_tau - 1}")
        return region * 3 * self.n_tau + 3 * m

    def block(self, region: int, m: int) -> np.ndarray:
        start = self.offset(region, m)
        return self.y[start:start + 3].copy()

    def newest(self) -> np.ndarray:
        """(R, 3) states of the newest day"""
        return unstack(self)[:, -1].copy()


def stack(history: np.ndarray, k: Optional[int] = None) -> StackedState:
    """Stack an oldest-first (R, n_tau, 3) window into Y[k]"""
    history = np.asarray(history, dtype=np.float64)
    if history.ndim != 3 or history.shape[2] != 3:
        raise DimensionMismatch(f"History must be (R, n_tau, 3), got {history.shape}")
    n_regions, n_tau, _ = history.shape
    return StackedState(history.reshape(-1), n_regions, n_tau, k)


def unstack(state: StackedState) -> np.ndarray:
    return state.y.reshape(state.n_regions, state.n_tau, 3).copy()
