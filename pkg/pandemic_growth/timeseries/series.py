"""
Dense per-region cumulative time series and the quantities derived from it.

Totals are held in a read-only float64 array of shape (R, K_max, 3) in
region-major, day-minor layout; the last axis is (cases, deaths, recoveries).
Active cases and daily increments are always derived, never stored.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Dict, List, Union

import numpy as np

from ..core.errors import DimensionMismatch, InsufficientHistory, OutOfRange
from .registry import DayCalendar, RegionId, RegionRegistry

logger = logging.getLogger(__name__)

CHANNELS = ("cases", "deaths", "recoveries")

# Row vector a: active = t - d - r
ACTIVE_ROW = np.array([1.0, -1.0, -1.0])

RegionKey = Union[str, int, RegionId]


class CleaningMode(str, Enum):
    RAW = "raw"
    CLAMP = "clamp-nonnegative"


def _freeze(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, dtype=np.float64, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True)
class PandemicSeries:
    """Immutable ground-truth tape of cumulative totals"""
    registry: RegionRegistry
    calendar: DayCalendar
    totals: np.ndarray
    recoveries_synthetic: bool = False

    def __post_init__(self):
        totals = np.asarray(self.totals, dtype=np.float64)
        if totals.ndim != 3 or totals.shape[0] != len(self.registry) or totals.shape[2] != 3:
            raise DimensionMismatch(
                f"Totals must have shape (R={len(self.registry)}, K, 3), got {totals.shape}"
            )
        if totals.shape[1] < 1:
            raise DimensionMismatch("Series must cover at least one day")
        if not np.all(np.isfinite(totals)):
            raise DimensionMismatch("Totals must be finite")
        object.__setattr__(self, "totals", _freeze(totals))

    @property
    def n_regions(self) -> int:
        return self.totals.shape[0]

    @property
    def horizon(self) -> int:
        """K_max, the last day index present"""
        return self.totals.shape[1]

    def region(self, key: RegionKey) -> RegionId:
        return self.registry.get(key)

    def date_of(self, k: int) -> date:
        return self.calendar.to_date(k)

    def _check_day(self, k: int):
        if k < 1 or k > self.horizon:
            raise OutOfRange(f"Day {k} outside 1..{self.horizon}")

    def state(self, key: RegionKey, k: int) -> np.ndarray:
        """(t, d, r) of one region at day k"""
        self._check_day(k)
        return self.totals[self.registry.offset(key), k - 1].copy()

    def states(self, k: int) -> np.ndarray:
        """(R, 3) totals of all regions at day k"""
        self._check_day(k)
        return self.totals[:, k - 1].copy()

    def channel(self, key: RegionKey, name: str) -> np.ndarray:
        """Full history of one channel for one region"""
        return self.totals[self.registry.offset(key), :, CHANNELS.index(name)].copy()

    def actives(self) -> np.ndarray:
        """(R, K_max) actual active cases t - d - r"""
        return self.totals @ ACTIVE_ROW

    def content_hash(self) -> str:
        """SHA-256 over registry, epoch, flag and the raw totals"""
        digest = hashlib.sha256()
        digest.update(repr(self.registry.entries()).encode("utf-8"))
        digest.update(self.calendar.epoch.isoformat().encode("utf-8"))
        digest.update(b"synthetic" if self.recoveries_synthetic else b"reported")
        digest.update(np.ascontiguousarray(self.totals).tobytes())
        return digest.hexdigest()

    def truncated(self, k: int) -> "PandemicSeries":
        """Series restricted to days 1..k"""
        self._check_day(k)
        return PandemicSeries(self.registry, self.calendar, self.totals[:, :k], self.recoveries_synthetic)

    def extended(self, states: np.ndarray) -> "PandemicSeries":
        """Series with one more day appended; `states` is (R, 3)"""
        states = np.asarray(states, dtype=np.float64)
        if states.shape != (self.n_regions, 3):
            raise DimensionMismatch(f"Appended states must be ({self.n_regions}, 3), got {states.shape}")
        totals = np.concatenate([self.totals, states[:, None, :]], axis=1)
        return PandemicSeries(self.registry, self.calendar, totals, self.recoveries_synthetic)

    def aggregate(self, code: str = "US", name: str = "United States") -> "PandemicSeries":
        """Single-region series summing every region"""
        totals = self.totals.sum(axis=0, keepdims=True)
        return PandemicSeries(RegionRegistry([(code, name)]), self.calendar, totals, self.recoveries_synthetic)

    def subset(self, codes: List[str]) -> "PandemicSeries":
        """Series restricted to the given regions (re-sorted by name)"""
        registry = RegionRegistry([(c, self.registry.get(c).name) for c in codes])
        rows = [self.registry.offset(region.code) for region in registry]
        return PandemicSeries(registry, self.calendar, self.totals[rows], self.recoveries_synthetic)


@dataclass(frozen=True)
class IncrementSeries:
    """Daily increments for days 2..K_max; values[:, k-2] is day k"""
    values: np.ndarray
    mode: CleaningMode
    clamped_count: int = 0
    clamped_by_channel: Dict[str, int] = field(default_factory=dict)

    def on_day(self, key_offset: int, k: int) -> np.ndarray:
        if k < 2 or k - 2 >= self.values.shape[1]:
            raise OutOfRange(f"Increments exist for days 2..{self.values.shape[1] + 1}, got {k}")
        return self.values[key_offset, k - 2].copy()

    def new_cases(self, key_offset: int) -> np.ndarray:
        return self.values[key_offset, :, 0].copy()

    def new_deaths(self, key_offset: int) -> np.ndarray:
        return self.values[key_offset, :, 1].copy()

    def new_recoveries(self, key_offset: int) -> np.ndarray:
        return self.values[key_offset, :, 2].copy()


def active_cases(series: PandemicSeries, i: RegionKey, k: int) -> float:
    """t_i[k] - d_i[k] - r_i[k]; negative on raw data with corrections"""
    t, d, r = series.state(i, k)
    return float(t - d - r)


def increments(series: PandemicSeries, mode: Union[CleaningMode, str] = CleaningMode.RAW) -> IncrementSeries:
    """First differences of the totals, optionally clamped at zero"""
    mode = CleaningMode(mode)
    if series.horizon < 2:
        raise InsufficientHistory("Increments need at least two days", minimum_day=2)

    raw = np.diff(series.totals, axis=1)
    if mode is CleaningMode.RAW:
        return IncrementSeries(values=_freeze(raw), mode=mode)

    negative = raw < 0
    by_channel = {name: int(negative[:, :, c].sum()) for c, name in enumerate(CHANNELS)}
    clamped = np.where(negative, 0.0, raw)
    count = int(negative.sum())
    if count:
        logger.debug(f"Clamped {count} negative increments {by_channel}")
    return IncrementSeries(values=_freeze(clamped), mode=mode, clamped_count=count, clamped_by_channel=by_channel)


def window(series: PandemicSeries, k: int, n: int) -> np.ndarray:
    """(R, n, 3) totals for days k-n+1..k, oldest first"""
    if n < 1:
        raise OutOfRange(f"Window length must be >= 1, got {n}")
    if k > series.horizon:
        raise OutOfRange(f"Day {k} is beyond the last recorded day {series.horizon}")
    if k - n + 1 < 1:
        raise InsufficientHistory(f"Window of {n} days ending at k={k} starts before day 1", minimum_day=n)
    return series.totals[:, k - n:k].copy()


def lagged_actives(history: np.ndarray) -> np.ndarray:
    """Convert an oldest-first (R, n, 3) window into (R, n) actives indexed by lag.

    Column h-1 holds the actives of lag h; lag 1 is the newest day of the window.
    """
    history = np.asarray(history, dtype=np.float64)
    if history.ndim != 3 or history.shape[2] != 3:
        raise DimensionMismatch(f"History must be (R, n, 3), got {history.shape}")
    return np.ascontiguousarray((history @ ACTIVE_ROW)[:, ::-1])


def negative_active_days(series: PandemicSeries) -> List[Dict[str, object]]:
    """Every (region, day) whose active count is negative"""
    actives = series.actives()
    rows, cols = np.nonzero(actives < 0)
    found = []
    for offset, col in zip(rows.tolist(), cols.tolist()):
        region = series.registry.get(offset + 1)
        found.append({
            "region": region.code,
            "k": col + 1,
            "date": series.date_of(col + 1).isoformat(),
            "active": float(actives[offset, col]),
        })
    return found
