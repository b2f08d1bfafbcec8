"""
Report emission for forecasts: error CSV, summary JSON and a plot-ready
long-format CSV. Counts are rounded half away from zero here and nowhere else.
"""

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.interfaces import IReportStorage
from ..timeseries.series import PandemicSeries
from .evaluation import NATIONAL_SCOPE, ErrorReport, SummaryRow, summarize
from .predictor import ForecastRun

PLOT_COLUMNS = ["date", "k", "scope", "channel", "horizon", "series", "value"]


def round_half_away(values) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def error_frame(report: ErrorReport) -> pd.DataFrame:
    frame = report.to_frame()
    if not frame.empty:
        frame["predicted"] = round_half_away(frame["predicted"]).astype(np.int64)
        frame["actual"] = round_half_away(frame["actual"]).astype(np.int64)
        # undefined errors become empty cells
        frame["rel_error"] = frame["rel_error"].astype(np.float64)
    return frame


def plot_frame(report: ErrorReport) -> pd.DataFrame:
    """One row per (day, scope, channel, horizon, series) with series in {actual, predicted}"""
    frame = error_frame(report)
    if frame.empty:
        return pd.DataFrame(columns=PLOT_COLUMNS)
    long = frame.melt(
        id_vars=["date", "k", "scope", "channel", "horizon"],
        value_vars=["actual", "predicted"],
        var_name="series",
        value_name="value",
    )
    return long.sort_values(["scope", "channel", "horizon", "k", "series"], kind="mergesort")[PLOT_COLUMNS]


def summary_payload(rows: List[SummaryRow], report: ErrorReport, thresholds: Sequence[float]) -> Dict[str, Any]:
    return {
        "records": len(report),
        "beta_mode": report.beta_mode,
        "recoveries_synthetic": report.recoveries_synthetic,
        "thresholds": [float(t) for t in thresholds],
        "groups": [row.to_dict() for row in rows],
    }


def write_forecast_reports(
    storage: IReportStorage,
    report: ErrorReport,
    thresholds: Sequence[float] = (0.01,),
    prefix: str = "",
) -> Dict[str, Any]:
    """Write <prefix>errors.csv, <prefix>summary.json and <prefix>plot.csv; returns the summary"""
    storage.write_csv(f"{prefix}errors.csv", error_frame(report))
    storage.write_csv(f"{prefix}plot.csv", plot_frame(report))
    payload = summary_payload(summarize(report, thresholds), report, thresholds)
    storage.write_json(f"{prefix}summary.json", payload)
    return payload


PREDICTION_COLUMNS = ["k0", "horizon", "k", "date", "scope", "beta", "cases", "deaths", "recoveries"]


def prediction_frame(runs: Sequence[ForecastRun], series: PandemicSeries,
                     horizons: Optional[Sequence[int]] = None) -> pd.DataFrame:
    """Forecast states per (anchor, horizon, scope); targets past the data are kept"""
    rows = []
    codes = list(series.registry.codes)
    for run in runs:
        for m in sorted(set(horizons or range(1, run.horizon + 1))):
            k = run.k0 + m
            day = series.calendar.to_date(k).isoformat()
            states = run.at(m)
            scoped = list(zip(codes, states))
            if series.n_regions > 1:
                scoped.append((NATIONAL_SCOPE, states.sum(axis=0)))
            for scope, values in scoped:
                rows.append([run.k0, m, k, day, scope, run.beta, *round_half_away(values).astype(np.int64)])
    return pd.DataFrame(rows, columns=PREDICTION_COLUMNS)


def write_prediction_reports(storage: IReportStorage, runs: Sequence[ForecastRun], series: PandemicSeries,
                             horizons: Optional[Sequence[int]] = None, prefix: str = "") -> Dict[str, Any]:
    frame = prediction_frame(runs, series, horizons)
    storage.write_csv(f"{prefix}predictions.csv", frame)
    return {"anchors": len(runs), "rows": len(frame)}
