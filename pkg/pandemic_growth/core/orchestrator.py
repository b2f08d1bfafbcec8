"""
Pipeline orchestrator: fans per-day work out to a thread pool and merges the
results by day key, so any worker count yields the same outputs.
"""

import asyncio
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..betanet.labels import LabelRule, build_dataset, held_out_days
from ..betanet.training import TrainingOptions, TrainingResult, accuracy, train
from ..dynamics.serialization import read_gains, write_gains
from ..forecast.evaluation import ErrorReport, evaluate_anchor
from ..forecast.predictor import ForecastRun, predict_m_step
from ..learning.learner import GainSet, LearningDiagnostics, LearningMode, LearningOptions, learn_gain_set
from ..stability.timeline import StabilityReport, analyse_day
from ..storage.managers.report_manager import config_hash
from ..timeseries.series import PandemicSeries
from .errors import InsufficientHistory
from .interfaces import DayResult, IArtifactCache, IBetaSource, IProgressTracker, IReportStorage

logger = logging.getLogger(__name__)


class PandemicPipelineOrchestrator:
    """Coordinates learning, forecasting and stability analysis over a day range"""

    def __init__(
        self,
        storage: IReportStorage,
        cache: IArtifactCache,
        progress_tracker: IProgressTracker,
        options: LearningOptions,
        mode: LearningMode = LearningMode.QUARANTINED,
        learning_fingerprint: Optional[Dict] = None,
        max_workers: int = 1,
        force: bool = False,
    ):
        self.storage = storage
        self.cache = cache
        self.progress_tracker = progress_tracker
        self.options = options
        self.mode = LearningMode(mode)
        self.config_hash = config_hash(learning_fingerprint or options.to_dict())
        self.max_workers = max_workers
        self.force = force

        self.lock = threading.Lock()
        self.completed = 0
        self.diagnostics = LearningDiagnostics()
        self.cache_hits = 0

    async def _fan_out(self, days: Sequence[int], work: Callable[[int], object], phase: str) -> Dict[int, object]:
        """Run work(k) for every day on the pool; results keyed and sorted by day"""
        days = sorted(set(days))
        self.completed = 0
        self.progress_tracker.update_progress(0, len(days), phase)

        def tracked(k: int):
            result = work(k)
            with self.lock:
                self.completed += 1
                self.progress_tracker.update_progress(self.completed, len(days), phase)
            return result

        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = [loop.run_in_executor(executor, tracked, k) for k in days]
            results = await asyncio.gather(*futures, return_exceptions=True)

        merged = {}
        for k, result in zip(days, results):
            if isinstance(result, Exception):
                self.progress_tracker.log_activity(f"{phase} failed at day {k}: {result}", "ERROR")
                raise result
            merged[k] = result
        return merged

    def _gain_paths(self, tag: str, k: int) -> Tuple[str, str]:
        return f"gains/{tag}/day_{k}.csv", f"gains/{tag}/quarantined/day_{k}.csv"

    def _load_cached(self, dataset_hash: str, k: int) -> Optional[GainSet]:
        paths = self.cache.lookup(dataset_hash, self.config_hash, k, self.mode.value)
        if paths is None:
            return None
        full = read_gains(paths[0])
        if self.mode is LearningMode.QUARANTINED:
            return GainSet(k, full, full, self.mode)
        if self.mode is LearningMode.INTERSTATE:
            return GainSet(k, full.restricted_to_diagonal(), full, self.mode)
        return GainSet(k, read_gains(paths[1]), full, self.mode)

    def _learn_day(self, series: PandemicSeries, tag: str, k: int) -> DayResult:
        diagnostics = LearningDiagnostics()
        gains = learn_gain_set(series.truncated(k), k, self.mode, self.options, diagnostics)
        full_path, diag_path = self._gain_paths(tag, k)
        paths = [str(write_gains(gains.g_full, self.storage.resolve(full_path), self.mode.value)[0])]
        if self.mode is LearningMode.BLENDED:
            paths.append(str(write_gains(gains.g_diag, self.storage.resolve(diag_path), "quarantined")[0]))
        return DayResult(day=k, success=True, value=(gains, diagnostics, paths))

    async def learn(self, series: PandemicSeries, days: Sequence[int], tag: str) -> Dict[int, GainSet]:
        """Gain sets for every day, from the cache where possible"""
        days = sorted(set(days))
        if days and days[0] < self.options.first_day:
            raise InsufficientHistory(f"Learning range starts at day {days[0]}", minimum_day=self.options.first_day)

        self.progress_tracker.log_phase_start("Learning", f"{len(days)} day(s), mode={self.mode.value}")
        dataset_hash = series.content_hash()
        gain_sets: Dict[int, GainSet] = {}
        pending = []
        for k in days:
            cached = None if self.force else self._load_cached(dataset_hash, k)
            if cached is not None:
                gain_sets[k] = cached
            else:
                pending.append(k)
        hits = len(days) - len(pending)
        self.cache_hits += hits
        if hits:
            logger.info(f"Reusing cached gains for {hits} day(s)")

        learned = await self._fan_out(pending, lambda k: self._learn_day(series, tag, k), "Learning")
        for k, result in learned.items():
            gains, diagnostics, paths = result.value
            gain_sets[k] = gains
            self.diagnostics.merge(diagnostics)
            self.cache.store(dataset_hash, self.config_hash, k, self.mode.value, paths)

        self.progress_tracker.log_phase_completion("Learning", {
            "days": len(days), "learned": len(pending), "cached": hits,
        })
        return dict(sorted(gain_sets.items()))

    async def evaluate(
        self,
        series: PandemicSeries,
        days: Sequence[int],
        horizons: Sequence[int],
        beta_source: IBetaSource,
        scopes: Optional[Sequence[str]],
        tag: str,
        relearn_each_step: bool = False,
    ) -> ErrorReport:
        gain_sets = await self.learn(series, days, tag)
        self.progress_tracker.log_phase_start("Evaluation", f"horizons {list(horizons)}, beta {beta_source.describe()}")
        relearn = self.options if relearn_each_step else None
        records = await self._fan_out(
            list(gain_sets),
            lambda k: evaluate_anchor(series, k, horizons, gain_sets[k], beta_source, scopes, relearn),
            "Evaluation",
        )
        report = ErrorReport(recoveries_synthetic=series.recoveries_synthetic, beta_mode=beta_source.describe())
        for k in sorted(records):
            report.extend(records[k])
        self.progress_tracker.log_phase_completion("Evaluation", {"records": len(report)})
        return report

    async def predict(
        self,
        series: PandemicSeries,
        days: Sequence[int],
        horizon: int,
        beta_source: IBetaSource,
        tag: str,
    ) -> List[ForecastRun]:
        gain_sets = await self.learn(series, days, tag)
        runs = await self._fan_out(
            list(gain_sets),
            lambda k: predict_m_step(series.truncated(k), k, horizon, gain_sets[k], beta_source),
            "Prediction",
        )
        return [runs[k] for k in sorted(runs)]

    async def stability(
        self,
        series: PandemicSeries,
        days: Sequence[int],
        scopes: Sequence[Tuple[str, object]],
        tag: str,
        tol_margin: float = 0.0,
        root_tol: float = 1e-8,
        max_iter: int = 500,
    ) -> Dict[str, StabilityReport]:
        """One report per (label, region) scope"""
        gain_sets = await self.learn(series, days, tag)
        reports = {}
        for label, region in scopes:
            per_day = await self._fan_out(
                list(gain_sets),
                lambda k: analyse_day(gain_sets[k].g_diag, region, tol_margin, root_tol, max_iter),
                f"Stability {label}",
            )
            report = StabilityReport(scope=label, tol_margin=tol_margin, calendar=series.calendar)
            report.days.extend(per_day[k] for k in sorted(per_day))
            reports[label] = report
        return reports

    async def train_network(self, series: PandemicSeries, rules: Sequence[LabelRule],
                            hyper: TrainingOptions) -> Tuple[TrainingResult, float]:
        """Train the beta network on the labeled windows; returns the result and training accuracy"""
        dataset = build_dataset(series, rules, self.options.n_tau)
        self.progress_tracker.log_phase_start("Training", f"{len(dataset)} labeled window(s)")
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=1) as executor:
            result = await loop.run_in_executor(executor, train, dataset, hyper)
        fit = accuracy(result.net, dataset)
        self.progress_tracker.log_phase_completion("Training", {
            "initial_loss": f"{result.initial_loss:.6g}",
            "final_loss": f"{result.final_loss:.6g}",
            "accuracy": f"{fit:.3f}",
        })
        return result, fit

    async def evaluate_held_out(
        self,
        series: PandemicSeries,
        rules: Sequence[LabelRule],
        beta_source: IBetaSource,
        horizons: Sequence[int],
        tag: str,
    ) -> Optional[ErrorReport]:
        """Forecast errors over the `test` rule days, scoped to the rule regions"""
        held_out = held_out_days(series, rules, self.options.n_tau)
        last_anchor = series.horizon - min(horizons)
        days = sorted({k for ks in held_out.values() for k in ks if self.options.first_day <= k <= last_anchor})
        if not days:
            logger.warning("No held-out day has enough history and a recorded target; skipping evaluation")
            return None
        return await self.evaluate(series, days, horizons, beta_source, sorted(held_out), tag)
