"""
Validation report produced alongside every ingestion.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from .series import CHANNELS, CleaningMode, PandemicSeries, increments, negative_active_days


@dataclass
class ValidationReport:
    """Anomalies found in an ingested dataset"""
    negative_actives: List[Dict[str, Any]] = field(default_factory=list)
    clamped_increments: List[Dict[str, Any]] = field(default_factory=list)
    duplicate_rows: List[Dict[str, Any]] = field(default_factory=list)
    dropped_before_epoch: int = 0
    recoveries_synthetic: bool = False
    n_regions: int = 0
    n_days: int = 0

    @property
    def clamped_count(self) -> int:
        return len(self.clamped_increments)

    @property
    def has_warnings(self) -> bool:
        return bool(self.negative_actives or self.clamped_increments or self.duplicate_rows)

    def to_dict(self) -> Dict[str, Any]:
        by_channel = {name: 0 for name in CHANNELS}
        for entry in self.clamped_increments:
            by_channel[entry["channel"]] += 1
        return {
            "regions": self.n_regions,
            "days": self.n_days,
            "recoveries_synthetic": self.recoveries_synthetic,
            "dropped_before_epoch": self.dropped_before_epoch,
            "negative_actives": self.negative_actives,
            "clamped_increments": {
                "count": self.clamped_count,
                "by_channel": by_channel,
                "entries": self.clamped_increments,
            },
            "duplicate_rows": self.duplicate_rows,
            "has_warnings": self.has_warnings,
        }


def inspect_series(series: PandemicSeries, report: ValidationReport) -> ValidationReport:
    """Fill the series-level sections (negative actives, clamped increments)"""
    report.n_regions = series.n_regions
    report.n_days = series.horizon
    report.recoveries_synthetic = series.recoveries_synthetic
    report.negative_actives = negative_active_days(series)

    report.clamped_increments = []
    if series.horizon >= 2:
        raw = increments(series, CleaningMode.RAW).values
        regions, days, channels = np.nonzero(raw < 0)
        for offset, day, channel in zip(regions.tolist(), days.tolist(), channels.tolist()):
            k = day + 2
            report.clamped_increments.append({
                "region": series.registry.get(offset + 1).code,
                "k": k,
                "date": series.date_of(k).isoformat(),
                "channel": CHANNELS[channel],
                "raw": float(raw[offset, day, channel]),
            })
    return report
