"""
CSV ingestion and export for cumulative per-region totals.

Input format: a header-driven UTF-8 CSV with one row per (region, date),
ISO-8601 dates, and the columns named by a ColumnSchema (extra columns are
ignored, column order is free). The recoveries column may be absent; it is
then zero-filled and the series is flagged `recoveries_synthetic`.
"""

import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from ..core.errors import (
    GapInSeries,
    HeaderMismatch,
    IngestionError,
    MissingRegion,
    NegativeTotal,
    UnparseableRow,
)
from .registry import DayCalendar, RegionRegistry
from .series import PandemicSeries
from .validation import ValidationReport, inspect_series

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColumnSchema:
    """Header names of the logical input columns"""
    date: str = "date"
    region: str = "region"
    total_cases: str = "total_cases"
    total_deaths: str = "total_deaths"
    total_recoveries: str = "total_recoveries"

    @classmethod
    def from_dict(cls, mapping: Optional[Dict[str, str]]) -> "ColumnSchema":
        return cls(**(mapping or {}))

    def to_dict(self) -> Dict[str, str]:
        return {
            "date": self.date,
            "region": self.region,
            "total_cases": self.total_cases,
            "total_deaths": self.total_deaths,
            "total_recoveries": self.total_recoveries,
        }


def _line_numbers(frame: pd.DataFrame) -> np.ndarray:
    # header is line 1
    return np.arange(len(frame)) + 2


def _to_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return np.nan


def _parse_totals(frame: pd.DataFrame, column: str, lines: np.ndarray) -> np.ndarray:
    # exact parse, so export_csv output re-ingests bit for bit
    values = frame[column].str.strip().map(_to_float).to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        first = int(np.argmax(bad))
        raise UnparseableRow(int(lines[first]), f"{column} value '{frame[column].iloc[first]}' is not a finite number")
    negative = values < 0
    if negative.any():
        first = int(np.argmax(negative))
        raise NegativeTotal(int(lines[first]), column, float(values[first]))
    return values


def ingest_csv(
    path: Union[str, Path],
    registry: RegionRegistry,
    epoch_date: date,
    schema: ColumnSchema = ColumnSchema(),
    report: Optional[ValidationReport] = None,
) -> PandemicSeries:
    """Parse, validate and densify a cumulative-totals CSV.

    Rows are deduplicated on (region, date) keeping the last occurrence.
    Rows dated before the epoch are dropped. Every registry region must cover
    every day from the epoch to the last date in the file.
    """
    path = Path(path)
    if not path.is_file():
        raise IngestionError(f"Input file does not exist: {path}")
    report = report if report is not None else ValidationReport()

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise IngestionError(f"Failed to read CSV {path}: {exc}") from exc

    frame.columns = [str(column).strip() for column in frame.columns]
    required = {schema.date, schema.region, schema.total_cases, schema.total_deaths}
    missing = required - set(frame.columns)
    if missing:
        raise HeaderMismatch(missing)

    synthetic = schema.total_recoveries not in frame.columns
    if synthetic:
        logger.warning(f"Column '{schema.total_recoveries}' absent: recoveries zero-filled and flagged synthetic")

    lines = _line_numbers(frame)

    dates = pd.to_datetime(frame[schema.date].str.strip(), format="%Y-%m-%d", errors="coerce")
    if dates.isna().any():
        first = int(np.argmax(dates.isna().to_numpy()))
        raise UnparseableRow(int(lines[first]), f"unparseable date '{frame[schema.date].iloc[first]}'")

    regions = frame[schema.region].str.strip()
    unknown = ~regions.map(registry.contains).astype(bool)
    if unknown.any():
        first = int(np.argmax(unknown.to_numpy()))
        raise UnparseableRow(int(lines[first]), f"region '{regions.iloc[first]}' is not in the registry")

    cases = _parse_totals(frame, schema.total_cases, lines)
    deaths = _parse_totals(frame, schema.total_deaths, lines)
    recoveries = np.zeros(len(frame)) if synthetic else _parse_totals(frame, schema.total_recoveries, lines)

    calendar = DayCalendar(epoch_date)
    epoch = pd.Timestamp(epoch_date)
    days = ((dates - epoch).dt.days + 1).to_numpy(dtype=np.int64)

    parsed = pd.DataFrame({
        "line": lines,
        "region": regions.to_numpy(),
        "k": days,
        "t": cases,
        "d": deaths,
        "r": recoveries,
    })

    duplicated = parsed.duplicated(subset=["region", "k"], keep="last")
    if duplicated.any():
        for row in parsed[duplicated].itertuples(index=False):
            report.duplicate_rows.append({
                "line": int(row.line),
                "region": row.region,
                "date": calendar.to_date(int(row.k)).isoformat(),
            })
        logger.warning(f"Dropped {int(duplicated.sum())} duplicate (region, date) rows, last occurrence kept")
        parsed = parsed[~duplicated]

    early = parsed["k"] < 1
    if early.any():
        report.dropped_before_epoch = int(early.sum())
        logger.info(f"Dropped {report.dropped_before_epoch} rows dated before epoch {epoch_date.isoformat()}")
        parsed = parsed[~early]

    if parsed.empty:
        raise IngestionError(f"No rows on or after epoch {epoch_date.isoformat()}")

    absent = [code for code in registry.codes if code not in set(parsed["region"])]
    if absent:
        raise MissingRegion(absent)

    horizon = int(parsed["k"].max())
    totals = np.full((len(registry), horizon, 3), np.nan)
    offsets = parsed["region"].map(registry.offset).to_numpy(dtype=np.int64)
    totals[offsets, parsed["k"].to_numpy() - 1] = parsed[["t", "d", "r"]].to_numpy(dtype=np.float64)

    holes = np.isnan(totals[:, :, 0])
    if holes.any():
        offset = int(np.argmax(holes.any(axis=1)))
        first_day = int(np.argmax(holes[offset])) + 1
        raise GapInSeries(registry.get(offset + 1).code, calendar.to_date(first_day), int(holes[offset].sum()))

    series = PandemicSeries(registry, calendar, totals, recoveries_synthetic=synthetic)
    inspect_series(series, report)
    logger.info(f"Ingested {len(registry)} regions x {horizon} days from {path.name}")
    return series


def export_csv(series: PandemicSeries, path: Union[str, Path], schema: ColumnSchema = ColumnSchema()) -> Path:
    """Write the series in the input format; re-ingesting reproduces it bit-exactly"""
    path = Path(path)
    n_regions, horizon = series.n_regions, series.horizon
    dates = [series.date_of(k).isoformat() for k in range(1, horizon + 1)]

    frame = pd.DataFrame({
        schema.date: np.tile(dates, n_regions),
        schema.region: np.repeat(series.registry.codes, horizon),
        schema.total_cases: series.totals[:, :, 0].reshape(-1),
        schema.total_deaths: series.totals[:, :, 1].reshape(-1),
    })
    if not series.recoveries_synthetic:
        frame[schema.total_recoveries] = series.totals[:, :, 2].reshape(-1)

    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", encoding="utf-8")
    return path
