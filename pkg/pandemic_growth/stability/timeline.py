"""
Per-day stability verdicts of the active-case recursion.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from ..core.errors import OutOfRange
from ..core.interfaces import IReportStorage
from ..dynamics.gains import GainTensor, IndexKey
from ..timeseries.registry import DayCalendar
from .gamma import gamma_from_gains
from .roots import companion_matrix, eigen_magnitudes

logger = logging.getLogger(__name__)

STABILITY_COLUMNS = ["k", "date", "scope", "rank", "magnitude", "spectral_radius", "stable"]


@dataclass(frozen=True)
class DayStability:
    k: int
    magnitudes: List[float]
    spectral_radius: float
    stable: bool
    converged: bool = True
    max_residual: float = 0.0

    @property
    def gap(self) -> float:
        """Distance from the unit circle, positive when inside"""
        return 1.0 - self.spectral_radius


@dataclass
class StabilityReport:
    scope: str
    tol_margin: float
    days: List[DayStability] = field(default_factory=list)
    calendar: Optional[DayCalendar] = None

    @property
    def first_stable_day(self) -> Optional[int]:
        """Earliest k from which every later day is stable"""
        k_s = None
        for entry in reversed(self.days):
            if not entry.stable:
                break
            k_s = entry.k
        return k_s

    def crossings(self) -> List[Dict[str, Any]]:
        """Days where the spectral radius crosses 1 in either direction"""
        found = []
        for previous, current in zip(self.days, self.days[1:]):
            before, after = previous.spectral_radius >= 1.0, current.spectral_radius >= 1.0
            if before != after:
                found.append({
                    "k": current.k,
                    "date": self._date(current.k),
                    "direction": "outward" if after else "inward",
                    "spectral_radius": current.spectral_radius,
                })
        return found

    def _date(self, k: int) -> Optional[str]:
        return self.calendar.to_date(k).isoformat() if self.calendar else None

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for entry in self.days:
            for rank, magnitude in enumerate(entry.magnitudes, start=1):
                rows.append([entry.k, self._date(entry.k), self.scope, rank, magnitude,
                             entry.spectral_radius, entry.stable])
        return pd.DataFrame(rows, columns=STABILITY_COLUMNS)

    def summary(self) -> Dict[str, Any]:
        k_s = self.first_stable_day
        return {
            "scope": self.scope,
            "tol_margin": self.tol_margin,
            "days": len(self.days),
            "first_day": self.days[0].k if self.days else None,
            "last_day": self.days[-1].k if self.days else None,
            "k_s": k_s,
            "k_s_date": self._date(k_s) if k_s is not None else None,
            "unstable_days": sum(1 for entry in self.days if not entry.stable),
            "not_converged_days": [entry.k for entry in self.days if not entry.converged],
            "crossings": self.crossings(),
            "gaps": [{"k": entry.k, "gap": entry.gap} for entry in self.days],
        }


def analyse_day(gains: GainTensor, region: IndexKey = 1, tol_margin: float = 0.0,
                root_tol: float = 1e-8, max_iter: int = 500) -> DayStability:
    gamma = gamma_from_gains(gains, region)
    result = eigen_magnitudes(companion_matrix(gamma), root_tol, max_iter)
    radius = result.spectral_radius
    return DayStability(
        k=int(gains.day),
        magnitudes=[float(m) for m in result.magnitudes],
        spectral_radius=radius,
        stable=radius < 1.0 - tol_margin,
        converged=result.converged,
        max_residual=float(result.residuals.max()) if result.residuals.size else 0.0,
    )


def stability_timeline(
    gains_per_day: Iterable[GainTensor],
    scope: str,
    region: IndexKey = 1,
    tol_margin: float = 0.0,
    root_tol: float = 1e-8,
    max_iter: int = 500,
    calendar: Optional[DayCalendar] = None,
) -> StabilityReport:
    """Verdicts for a contiguous run of learned days"""
    gains_per_day = list(gains_per_day)
    if any(g.day is None for g in gains_per_day):
        raise OutOfRange("Every gain tensor must carry the day it was learned for")
    ordered = sorted(gains_per_day, key=lambda g: g.day)
    days = [g.day for g in ordered]
    if days and days != list(range(days[0], days[0] + len(days))):
        raise OutOfRange(f"Stability timeline needs a contiguous day range, got {days[0]}..{days[-1]} with holes")

    report = StabilityReport(scope=scope, tol_margin=tol_margin, calendar=calendar)
    for gains in ordered:
        report.days.append(analyse_day(gains, region, tol_margin, root_tol, max_iter))
    logger.info(f"Stability over {len(days)} day(s) for {scope}: k_s={report.first_stable_day}")
    return report


def write_stability_reports(storage: IReportStorage, report: StabilityReport, prefix: str = "") -> Dict[str, Any]:
    storage.write_csv(f"{prefix}stability.csv", report.to_frame())
    summary = report.summary()
    storage.write_json(f"{prefix}stability_summary.json", summary)
    return summary
