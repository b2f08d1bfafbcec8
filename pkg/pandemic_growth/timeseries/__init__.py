"""
Time series domain - handles ingestion, validation and indexed access to
per-region cumulative totals and the quantities derived from them.
"""

from .registry import DayCalendar, RegionId, RegionRegistry
from .series import (
    ACTIVE_ROW, CHANNELS, CleaningMode, IncrementSeries, PandemicSeries,
    active_cases, increments, lagged_actives, negative_active_days, window,
)
from .validation import ValidationReport, inspect_series
from .ingest import ColumnSchema, export_csv, ingest_csv

__all__ = [
    "DayCalendar", "RegionId", "RegionRegistry",
    "ACTIVE_ROW", "CHANNELS", "CleaningMode", "IncrementSeries", "PandemicSeries",
    "active_cases", "increments", "lagged_actives", "negative_active_days", "window",
    "ValidationReport", "inspect_series",
    "ColumnSchema", "export_csv", "ingest_csv",
]
