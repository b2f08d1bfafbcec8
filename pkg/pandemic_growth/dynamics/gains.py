"""
Non-negative gain tensor K[i, j, h] = (omega, lambda, theta) and its 3x3 blocks.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..core.errors import DimensionMismatch, OutOfRange
from ..timeseries.registry import RegionId
from ..timeseries.series import ACTIVE_ROW

GAIN_NAMES = ("omega", "lambda", "theta")

IndexKey = Union[int, RegionId]


def _index(key: IndexKey) -> int:
    if isinstance(key, RegionId):
        return key.index
    if isinstance(key, str):
        raise OutOfRange(f"Region code '{key}' needs resolving through the registry first")
    return int(key)


@dataclass(frozen=True)
class GainTensor:
    """Gains indexed [target i, source j, lag h, channel], all 0-based in storage.

    Lag offset 0 is lag h=1, the newest day of the window.
    """
    values: np.ndarray
    day: Optional[int] = None
    mode: str = "quarantined"

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 4 or values.shape[0] != values.shape[1] or values.shape[3] != 3:
            raise DimensionMismatch(f"Gain tensor must be (R, R, n_tau, 3), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DimensionMismatch("Gains must be finite")
        if np.any(values < 0):
            raise OutOfRange("Gains must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, n_regions: int, n_tau: int, day: Optional[int] = None, mode: str = "quarantined") -> "GainTensor":
        return cls(np.zeros((n_regions, n_regions, n_tau, 3)), day, mode)

    @classmethod
    def from_components(cls, omega, lambda_, theta, day: Optional[int] = None, mode: str = "quarantined") -> "GainTensor":
        return cls(np.stack([omega, lambda_, theta], axis=-1), day, mode)

    @property
    def n_regions(self) -> int:
        return self.values.shape[0]

    @property
    def n_tau(self) -> int:
        return self.values.shape[2]

    @property
    def omega(self) -> np.ndarray:
        return self.values[..., 0]

    @property
    def lambda_(self) -> np.ndarray:
        return self.values[..., 1]

    @property
    def theta(self) -> np.ndarray:
        return self.values[..., 2]

    def gain(self, i: IndexKey, j: IndexKey, h: int) -> np.ndarray:
        """K_{i,j,h} with 1-based indices"""
        i, j = _index(i), _index(j)
        if not (1 <= i <= self.n_regions and 1 <= j <= self.n_regions):
            raise OutOfRange(f"Region pair ({i}, {j}) outside 1..{self.n_regions}")
        if not 1 <= h <= self.n_tau:
            raise OutOfRange(f"Lag {h} outside 1..{self.n_tau}")
        return self.values[i - 1, j - 1, h - 1].copy()

    def self_gains(self, i: IndexKey) -> np.ndarray:
        """(n_tau, 3) gains of region i on itself"""
        i = _index(i)
        if not 1 <= i <= self.n_regions:
            raise OutOfRange(f"Region {i} outside 1..{self.n_regions}")
        return self.values[i - 1, i - 1].copy()

    def restricted_to_diagonal(self) -> "GainTensor":
        mask = np.eye(self.n_regions, dtype=bool)[:, :, None, None]
        return GainTensor(np.where(mask, self.values, 0.0), self.day, self.mode)

    def with_day(self, day: int) -> "GainTensor":
        return GainTensor(self.values, day, self.mode)

    def same_shape(self, other: "GainTensor") -> bool:
        return self.values.shape == other.values.shape


def gain_block(g: GainTensor, i: IndexKey, j: IndexKey, h: int) -> np.ndarray:
    """G_{i,j,h} = K_{i,j,h} a with a = [1, -1, -1]"""
    return np.outer(g.gain(i, j, h), ACTIVE_ROW)


def gain_blocks(g: GainTensor) -> np.ndarray:
    """All blocks at once, shape (R, R, n_tau, 3, 3)"""
    return g.values[..., :, None] * ACTIVE_ROW[None, None, None, None, :]
