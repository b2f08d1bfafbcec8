"""
Subcommand handlers. Each handler returns the process exit code:
0 success, 1 interrupted or unexpected failure, 2 completed with warnings,
3 data or configuration error.
"""

import asyncio
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .. import __version__
from ..betanet.checkpoint import save_checkpoint
from ..betanet.labels import parse_rules
from ..betanet.training import TrainingOptions
from ..config.settings import ConfigurationManager
from ..core.errors import ConfigurationError, InsufficientHistory, OutOfRange, PandemicGrowthError
from ..core.interfaces import IBetaSource
from ..core.orchestrator import PandemicPipelineOrchestrator
from ..factory.component_factory import PipelineFactory
from ..forecast.beta_sources import NetworkBetaSource
from ..forecast.evaluation import ErrorReport, default_scopes
from ..forecast.reports import write_forecast_reports, write_prediction_reports
from ..learning.learner import LearningMode
from ..stability.timeline import StabilityReport
from ..storage.managers.report_manager import config_hash
from ..timeseries.ingest import export_csv, ingest_csv
from ..timeseries.series import PandemicSeries
from ..timeseries.validation import ValidationReport
from .parser import config_overrides

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_WARNINGS = 2
EXIT_DATA_ERROR = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# held-out accuracy is reported against 0.01 %
HELD_OUT_THRESHOLD = 1e-4

ALL_SCOPES = "all"
REGIONS_TAG = "regions"


def configure_logging(verbose: bool = False):
    """Single stderr handler; reports only ever go to files"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def load_config(args) -> ConfigurationManager:
    config = ConfigurationManager.from_file(args.config) if getattr(args, "config", None) else ConfigurationManager()
    config.apply_overrides(config_overrides(args))
    return config.validate()


@dataclass
class RunContext:
    """Everything a subcommand needs once the data is loaded"""
    command: str
    config: ConfigurationManager
    pipeline: PandemicPipelineOrchestrator
    series: PandemicSeries
    validation: ValidationReport
    warnings: List[str] = field(default_factory=list)

    @property
    def storage(self):
        return self.pipeline.storage

    def warn(self, message: str):
        logger.warning(message)
        self.warnings.append(message)


@dataclass(frozen=True)
class Scope:
    """Series a command runs on and the report scopes it emits"""
    series: PandemicSeries
    report_scopes: List[str]
    stability_scopes: List[Tuple[str, Any]]
    tag: str


def open_run(command: str, config: ConfigurationManager, mode: Optional[LearningMode] = None) -> RunContext:
    """Build the pipeline, write the resolved config and ingest the data"""
    if not config.data.path:
        raise ConfigurationError("No input data: set data.path or pass --data")
    pipeline = PipelineFactory.create_orchestrator(config, mode)
    pipeline.storage.write_json("resolved_config.json", config.to_dict())

    validation = ValidationReport()
    series = ingest_csv(
        config.data.path,
        PipelineFactory.create_registry(config),
        config.epoch_date(),
        PipelineFactory.create_schema(config),
        validation,
    )
    pipeline.storage.write_json("validation_report.json", validation.to_dict())
    context = RunContext(command, config, pipeline, series, validation)
    if validation.has_warnings:
        context.warn(
            f"Input anomalies: {len(validation.duplicate_rows)} duplicate row(s), "
            f"{validation.clamped_count} clamped increment(s), "
            f"{len(validation.negative_actives)} negative active day(s)"
        )
    return context


def resolve_scope(context: RunContext) -> Scope:
    config, series = context.config, context.series
    scope = config.forecast.scope
    national = config.data.national_code
    if scope == national:
        aggregate = series.aggregate(national, "National aggregate")
        return Scope(aggregate, [national], [(national, 1)], national)
    if scope == ALL_SCOPES:
        return Scope(series, default_scopes(series), [(region.code, region) for region in series.registry], REGIONS_TAG)
    if series.registry.contains(scope):
        return Scope(series, [scope], [(scope, series.registry.get(scope))], REGIONS_TAG)
    raise ConfigurationError(f"Unknown scope '{scope}': use '{national}', '{ALL_SCOPES}' or a region code")


def _parse_day(context: RunContext, value) -> int:
    try:
        return context.series.calendar.parse(value)
    except ValueError as exc:
        raise ConfigurationError(f"Invalid day '{value}': expected an index or YYYY-MM-DD") from exc


def resolve_days(context: RunContext, series: PandemicSeries, last_default: int) -> List[int]:
    """Configured day range, defaulting to first learnable day .. last_default"""
    forecast = context.config.forecast
    minimum = context.pipeline.options.first_day
    first = _parse_day(context, forecast.from_day) if forecast.from_day is not None else minimum
    last = _parse_day(context, forecast.to_day) if forecast.to_day is not None else last_default
    if first < minimum:
        raise InsufficientHistory(
            f"Day range starts at {first}; with n_tau={context.pipeline.options.n_tau} "
            f"and fit_days={context.pipeline.options.window} the first learnable day is {minimum}",
            minimum_day=minimum,
        )
    if last > series.horizon:
        raise OutOfRange(f"Day range ends at {last} but the data stops at day {series.horizon}")
    if last < first:
        raise ConfigurationError(f"Empty day range {first}..{last}")
    return list(range(first, last + 1))


def _check_network_width(source: IBetaSource, context: RunContext, series: PandemicSeries):
    if isinstance(source, NetworkBetaSource):
        expected = 3 * context.pipeline.options.n_tau * series.n_regions
        if source.net.n_inputs != expected:
            raise ConfigurationError(
                f"Network expects {source.net.n_inputs} inputs but the {series.n_regions}-region "
                f"series gives {expected}"
            )


def _training_options(config: ConfigurationManager) -> TrainingOptions:
    network = config.network
    return TrainingOptions(
        hidden=network.hidden, lr=network.lr, epochs=network.epochs, batch=network.batch, seed=network.seed,
    )


async def _train(context: RunContext, series: PandemicSeries) -> NetworkBetaSource:
    """Train on the configured label rules and save the checkpoint"""
    config = context.config
    rules = parse_rules(config.network.labels)
    hyper = _training_options(config)
    result, fit = await context.pipeline.train_network(series, rules, hyper)

    checkpoint = context.storage.resolve("betanet/network.json")
    save_checkpoint(result.net, checkpoint, meta={
        "version": __version__,
        "n_tau": config.learning.n_tau,
        "regions": series.registry.codes,
        "dataset_hash": series.content_hash(),
        "training": hyper.to_dict(),
    })
    context.storage.write_json("betanet/training.json", {
        "initial_loss": result.initial_loss,
        "final_loss": result.final_loss,
        "train_accuracy": fit,
        "loss_curve": result.loss_curve,
        "checkpoint": checkpoint.name,
    })
    logger.info(f"Saved beta network checkpoint to {checkpoint}")
    return NetworkBetaSource(result.net, config.learning.n_tau, bool(config.network.threshold), label="network:trained")


def write_provenance(context: RunContext, series: PandemicSeries, extra: Optional[Dict[str, Any]] = None):
    """Run metadata; timings make this the one non-reproducible output"""
    payload = {
        "version": __version__,
        "command": context.command,
        "dataset_hash": series.content_hash(),
        "config_hash": config_hash(context.config.to_dict()),
        "learning_config_hash": context.pipeline.config_hash,
        "cache_hits": context.pipeline.cache_hits,
        "warnings": context.warnings,
        "performance": context.pipeline.progress_tracker.get_performance_metrics(),
    }
    payload.update(extra or {})
    context.storage.write_json("provenance.json", payload)


def _finish(context: RunContext) -> int:
    if context.pipeline.diagnostics.has_warnings:
        diagnostics = context.pipeline.diagnostics.to_dict()
        context.warn(f"Learning diagnostics flagged problems: {diagnostics}")
    return EXIT_WARNINGS if context.warnings else EXIT_OK


def cmd_ingest(config: ConfigurationManager) -> int:
    context = open_run("ingest", config)
    path = export_csv(context.series, context.storage.resolve("dataset.csv"), PipelineFactory.create_schema(config))
    logger.info(f"Normalized dataset: {context.series.n_regions} region(s) x {context.series.horizon} day(s) -> {path}")
    write_provenance(context, context.series)
    return _finish(context)


async def cmd_learn(config: ConfigurationManager) -> int:
    context = open_run("learn", config)
    scope = resolve_scope(context)
    days = resolve_days(context, scope.series, scope.series.horizon)
    gain_sets = await context.pipeline.learn(scope.series, days, scope.tag)
    context.storage.write_json("learn_summary.json", {
        "mode": context.pipeline.mode.value,
        "scope": config.forecast.scope,
        "days": [days[0], days[-1]],
        "learned_days": len(gain_sets),
        "diagnostics": context.pipeline.diagnostics.to_dict(),
    })
    write_provenance(context, scope.series)
    return _finish(context)


async def _beta_source(context: RunContext, scope: Scope, train_first: bool) -> IBetaSource:
    source = await _train(context, scope.series) if train_first else \
        PipelineFactory.create_beta_source(context.config)
    _check_network_width(source, context, scope.series)
    if context.pipeline.mode is LearningMode.QUARANTINED and source.describe().startswith("network"):
        logger.warning("Quarantined gains make both blend endpoints equal; beta has no effect")
    return source


async def cmd_predict(config: ConfigurationManager, train_first: bool = False) -> int:
    context = open_run("predict", config)
    scope = resolve_scope(context)
    source = await _beta_source(context, scope, train_first)
    days = resolve_days(context, scope.series, scope.series.horizon)
    horizons = config.forecast.horizons
    runs = await context.pipeline.predict(scope.series, days, max(horizons), source, scope.tag)
    summary = write_prediction_reports(context.storage, runs, scope.series, horizons)
    write_provenance(context, scope.series, {"predictions": summary, "beta": source.describe()})
    return _finish(context)


def _blend_check(report: ErrorReport):
    """Log the worst error per channel so fixed-beta runs can be compared"""
    for channel in ("cases", "deaths", "recoveries"):
        defined = [abs(r.rel_error) for r in report.records if r.channel == channel and r.rel_error is not None]
        if defined:
            logger.info(f"{report.beta_mode} {channel}: max |e| = {max(defined):.3e} over {len(defined)} cell(s)")


async def cmd_eval(config: ConfigurationManager, train_first: bool = False) -> int:
    context = open_run("eval", config)
    scope = resolve_scope(context)
    source = await _beta_source(context, scope, train_first)
    horizons = config.forecast.horizons
    days = resolve_days(context, scope.series, scope.series.horizon - min(horizons))
    report = await context.pipeline.evaluate(
        scope.series, days, horizons, source, scope.report_scopes, scope.tag,
        relearn_each_step=bool(config.forecast.relearn_each_step),
    )
    _blend_check(report)
    summary = write_forecast_reports(context.storage, report, config.forecast.thresholds)
    write_provenance(context, scope.series, {"records": summary["records"], "beta": source.describe()})
    return _finish(context)


async def cmd_stability(config: ConfigurationManager) -> int:
    context = open_run("stability", config)
    scope = resolve_scope(context)
    days = resolve_days(context, scope.series, scope.series.horizon)
    stability = config.stability
    reports = await context.pipeline.stability(
        scope.series, days, scope.stability_scopes, scope.tag,
        stability.tol_margin, stability.root_tol, stability.max_iter,
    )
    summaries = _write_stability(context, list(reports.values()))
    for summary in summaries:
        if summary["not_converged_days"]:
            context.warn(f"{summary['scope']}: root finder did not converge on {len(summary['not_converged_days'])} day(s)")
        logger.info(f"{summary['scope']}: first day of sustained stability k_s = {summary['k_s']}")
    write_provenance(context, scope.series)
    return _finish(context)


def _write_stability(context: RunContext, reports: Sequence[StabilityReport]) -> List[Dict[str, Any]]:
    frames = [report.to_frame() for report in reports]
    context.storage.write_csv("stability.csv", pd.concat(frames, ignore_index=True))
    summaries = [report.summary() for report in reports]
    context.storage.write_json("stability_summary.json", {"scopes": summaries})
    return summaries


async def cmd_train_beta(config: ConfigurationManager) -> int:
    """Train, save the checkpoint, then evaluate blended forecasts on the held-out days"""
    context = open_run("train-beta", config, mode=LearningMode.BLENDED)
    series = context.series
    source = await _train(context, series)
    rules = parse_rules(config.network.labels)
    horizons = config.forecast.horizons
    report = await context.pipeline.evaluate_held_out(series, rules, source, horizons, REGIONS_TAG)
    extra: Dict[str, Any] = {"beta": source.describe()}
    if report is None:
        context.warn("Held-out evaluation skipped: no usable test days")
    else:
        thresholds = sorted(set(float(t) for t in config.forecast.thresholds) | {HELD_OUT_THRESHOLD})
        summary = write_forecast_reports(context.storage, report, thresholds, prefix="betanet/test_")
        extra["held_out_records"] = summary["records"]
    write_provenance(context, series, extra)
    return _finish(context)


HANDLERS: Dict[str, Callable] = {
    "ingest": cmd_ingest,
    "learn": cmd_learn,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "stability": cmd_stability,
    "train-beta": cmd_train_beta,
}


def run_command(args) -> int:
    """Dispatch a parsed command line and map failures onto exit codes"""
    configure_logging(getattr(args, "verbose", False))
    try:
        config = load_config(args)
        handler = HANDLERS[args.command]
        if args.command in ("predict", "eval"):
            outcome = handler(config, train_first=bool(getattr(args, "train_beta", False)))
        else:
            outcome = handler(config)
        return asyncio.run(outcome) if asyncio.iscoroutine(outcome) else outcome
    except KeyboardInterrupt:
        logger.error("Interrupted by user")
        return EXIT_FAILURE
    except PandemicGrowthError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_DATA_ERROR
    except Exception:
        logger.exception("Unexpected failure")
        return EXIT_FAILURE
