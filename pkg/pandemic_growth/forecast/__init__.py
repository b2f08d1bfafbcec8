"""
Forecast domain - handles M-step prediction, relative-error evaluation and
the forecast reports.
"""

from .beta_sources import FixedBetaSource, NetworkBetaSource, beta_source_from_spec, parse_beta_spec
from .predictor import ForecastRun, predict_m_step, predict_relearning
from .evaluation import (
    NATIONAL_SCOPE, ErrorRecord, ErrorReport, SummaryRow, compare, default_scopes, evaluate_anchor,
    relative_error, rolling_evaluate, summarize,
)
from .reports import (
    error_frame, plot_frame, prediction_frame, round_half_away, write_forecast_reports, write_prediction_reports,
)

__all__ = [
    "FixedBetaSource", "NetworkBetaSource", "beta_source_from_spec", "parse_beta_spec",
    "ForecastRun", "predict_m_step", "predict_relearning",
    "NATIONAL_SCOPE", "ErrorRecord", "ErrorReport", "SummaryRow", "compare", "default_scopes",
    "evaluate_anchor", "relative_error", "rolling_evaluate", "summarize",
    "error_frame", "plot_frame", "prediction_frame", "round_half_away", "write_forecast_reports",
    "write_prediction_reports",
]
