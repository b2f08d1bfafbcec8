"""
Relative-error evaluation of forecasts against actual totals.

e = (predicted - actual) / actual, so over-prediction is positive. Cells with
a zero actual are undefined (None) and are counted, never zero-filled.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.errors import EmptyReport, InsufficientHistory
from ..core.interfaces import IBetaSource
from ..learning.learner import GainSet, LearningMode, LearningOptions, learn_gain_set
from ..timeseries.series import CHANNELS, PandemicSeries
from .predictor import ForecastRun, predict_m_step, predict_relearning

logger = logging.getLogger(__name__)

NATIONAL_SCOPE = "national"

REPORT_COLUMNS = ["k", "date", "horizon", "scope", "channel", "predicted", "actual", "rel_error"]


@dataclass(frozen=True)
class ErrorRecord:
    """One compared cell; k is the target day k0 + horizon"""
    k: int
    date: str
    horizon: int
    scope: str
    channel: str
    predicted: float
    actual: float
    rel_error: Optional[float]

    @property
    def anchor(self) -> int:
        return self.k - self.horizon


@dataclass
class ErrorReport:
    records: List[ErrorRecord] = field(default_factory=list)
    recoveries_synthetic: bool = False
    beta_mode: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def extend(self, records: Iterable[ErrorRecord]):
        self.records.extend(records)

    def to_frame(self) -> pd.DataFrame:
        rows = [[getattr(record, column) for column in REPORT_COLUMNS] for record in self.records]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def errors(self, channel: str, horizon: int, scope: Optional[str] = None) -> List[Optional[float]]:
        return [
            record.rel_error for record in self.records
            if record.channel == channel and record.horizon == horizon and (scope is None or record.scope == scope)
        ]


def relative_error(predicted: float, actual: float) -> Optional[float]:
    if actual == 0:
        return None
    return float((predicted - actual) / actual)


def default_scopes(series: PandemicSeries) -> List[str]:
    scopes = list(series.registry.codes)
    if series.n_regions > 1:
        scopes.append(NATIONAL_SCOPE)
    return scopes


def compare(series: PandemicSeries, run: ForecastRun, horizons: Sequence[int],
            scopes: Optional[Sequence[str]] = None) -> List[ErrorRecord]:
    """Records for every requested horizon the run covers"""
    scopes = list(scopes) if scopes is not None else default_scopes(series)
    records = []
    for m in sorted(set(horizons)):
        if m > run.horizon:
            continue
        k = run.k0 + m
        predicted = run.at(m)
        actual = series.states(k)
        day = series.date_of(k).isoformat()
        for scope in scopes:
            if scope == NATIONAL_SCOPE:
                p, a = predicted.sum(axis=0), actual.sum(axis=0)
            else:
                offset = series.registry.offset(scope)
                p, a = predicted[offset], actual[offset]
            for c, channel in enumerate(CHANNELS):
                records.append(ErrorRecord(
                    k=k, date=day, horizon=m, scope=scope, channel=channel,
                    predicted=float(p[c]), actual=float(a[c]), rel_error=relative_error(p[c], a[c]),
                ))
    return records


def evaluate_anchor(
    series: PandemicSeries,
    k0: int,
    horizons: Sequence[int],
    gains: GainSet,
    beta_source: IBetaSource,
    scopes: Optional[Sequence[str]] = None,
    relearn: Optional[LearningOptions] = None,
) -> List[ErrorRecord]:
    """Forecast from k0 and compare every horizon whose target day is recorded"""
    reachable = min(max(horizons), series.horizon - k0)
    if reachable < 1:
        return []
    # forecasts see only days <= k0
    tape = series.truncated(k0)
    if relearn is not None:
        run = predict_relearning(tape, k0, reachable, gains.mode, relearn, beta_source, gains)
    else:
        run = predict_m_step(tape, k0, reachable, gains, beta_source)
    return compare(series, run, horizons, scopes)


def rolling_evaluate(
    series: PandemicSeries,
    k_range: Iterable[int],
    horizons: Sequence[int],
    mode: LearningMode,
    beta_source: IBetaSource,
    opts: Optional[LearningOptions] = None,
    scopes: Optional[Sequence[str]] = None,
    relearn_each_step: bool = False,
    gains_provider: Optional[Callable[[int], GainSet]] = None,
) -> ErrorReport:
    """Learn at each anchor day (or take cached gains), forecast and compare"""
    opts = opts or LearningOptions()
    days = sorted(set(int(k) for k in k_range))
    if days and days[0] < opts.first_day:
        raise InsufficientHistory(f"Evaluation range starts at day {days[0]}", minimum_day=opts.first_day)

    report = ErrorReport(recoveries_synthetic=series.recoveries_synthetic, beta_mode=beta_source.describe())
    for k0 in days:
        gains = gains_provider(k0) if gains_provider else learn_gain_set(series.truncated(k0), k0, mode, opts)
        report.extend(evaluate_anchor(
            series, k0, horizons, gains, beta_source, scopes, opts if relearn_each_step else None,
        ))
    return report


@dataclass
class SummaryRow:
    scope: str
    channel: str
    horizon: int
    count: int
    undefined: int
    max_abs: Optional[float]
    mean_abs: Optional[float]
    fraction_below: Dict[float, Optional[float]]

    def to_dict(self) -> Dict[str, object]:
        return {
            "scope": self.scope,
            "channel": self.channel,
            "horizon": self.horizon,
            "count": self.count,
            "undefined": self.undefined,
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "fraction_below": {f"{threshold:g}": value for threshold, value in self.fraction_below.items()},
        }


def summarize(report: ErrorReport, thresholds: Sequence[float] = (0.01,)) -> List[SummaryRow]:
    """max |e|, mean |e| and the fraction of defined cells below each threshold,
    per (scope, channel, horizon)"""
    if not report.records:
        raise EmptyReport("Cannot summarize an empty error report")

    groups: Dict[tuple, List[Optional[float]]] = {}
    for record in report.records:
        groups.setdefault((record.scope, record.channel, record.horizon), []).append(record.rel_error)

    scope_order = {scope: i for i, scope in enumerate(dict.fromkeys(r.scope for r in report.records))}
    rows = []
    for (scope, channel, horizon) in sorted(groups, key=lambda key: (scope_order[key[0]], CHANNELS.index(key[1]), key[2])):
        values = groups[(scope, channel, horizon)]
        defined = np.abs(np.array([v for v in values if v is not None], dtype=np.float64))
        if defined.size:
            fractions = {float(t): float(np.mean(defined < t)) for t in thresholds}
            max_abs, mean_abs = float(defined.max()), float(defined.mean())
        else:
            fractions = {float(t): None for t in thresholds}
            max_abs = mean_abs = None
        rows.append(SummaryRow(
            scope=scope, channel=channel, horizon=horizon,
            count=int(defined.size), undefined=len(values) - int(defined.size),
            max_abs=max_abs, mean_abs=mean_abs, fraction_below=fractions,
        ))
    return rows
