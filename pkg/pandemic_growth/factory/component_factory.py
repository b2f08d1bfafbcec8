"""
Factory class for creating and wiring all components together
"""

from pathlib import Path
from typing import Optional, Union

from ..config.settings import ConfigurationManager
from ..core.interfaces import IArtifactCache, IBetaSource, IProgressTracker, IReportStorage
from ..core.orchestrator import PandemicPipelineOrchestrator
from ..forecast.beta_sources import beta_source_from_spec
from ..learning.learner import LearningMode, LearningOptions
from ..monitoring.progress_tracker import ConsoleProgressTracker
from ..storage.database.sqlite_manager import SQLiteArtifactCache
from ..storage.managers.report_manager import ReportStorageManager
from ..timeseries.ingest import ColumnSchema
from ..timeseries.registry import DayCalendar, RegionRegistry

CACHE_FILENAME = "artifacts.db"


class PipelineFactory:
    """Factory for creating and configuring pipeline components"""

    @staticmethod
    def create_report_storage(out_dir: Union[str, Path]) -> IReportStorage:
        return ReportStorageManager(out_dir)

    @staticmethod
    def create_artifact_cache(out_dir: Union[str, Path]) -> IArtifactCache:
        """Cache database lives next to the artifacts it indexes"""
        return SQLiteArtifactCache(Path(out_dir) / CACHE_FILENAME)

    @staticmethod
    def create_progress_tracker(every: int = 10) -> IProgressTracker:
        return ConsoleProgressTracker(every=every)

    @staticmethod
    def create_registry(config: ConfigurationManager) -> RegionRegistry:
        return RegionRegistry([(entry["code"], entry["name"]) for entry in config.data.regions])

    @staticmethod
    def create_calendar(config: ConfigurationManager) -> DayCalendar:
        return DayCalendar(config.epoch_date())

    @staticmethod
    def create_schema(config: ConfigurationManager) -> ColumnSchema:
        return ColumnSchema.from_dict(config.data.columns)

    @staticmethod
    def create_learning_options(config: ConfigurationManager) -> LearningOptions:
        learning = config.learning
        max_iter = learning.nnls.get("max_iter")
        return LearningOptions(
            n_tau=learning.n_tau,
            fit_days=config.fit_days,
            weights={name: float(value) for name, value in learning.weights.items()},
            ridge=float(learning.ridge),
            tol=float(learning.nnls.get("tol", 1e-10)),
            max_iter=int(max_iter) if max_iter is not None else None,
        )

    @staticmethod
    def create_beta_source(config: ConfigurationManager, spec: Optional[str] = None) -> IBetaSource:
        checkpoint = Path(config.network.checkpoint) if config.network.checkpoint else None
        return beta_source_from_spec(
            spec or config.forecast.beta,
            config.learning.n_tau,
            threshold=bool(config.network.threshold),
            default_checkpoint=checkpoint,
        )

    @staticmethod
    def create_orchestrator(
        config: ConfigurationManager,
        mode: Optional[Union[str, LearningMode]] = None,
        progress_tracker: Optional[IProgressTracker] = None,
    ) -> PandemicPipelineOrchestrator:
        """Create a fully configured orchestrator writing into config.run.out"""
        out_dir = Path(config.run.out)
        storage = PipelineFactory.create_report_storage(out_dir)
        cache = PipelineFactory.create_artifact_cache(out_dir)
        progress_tracker = progress_tracker or PipelineFactory.create_progress_tracker()

        return PandemicPipelineOrchestrator(
            storage=storage,
            cache=cache,
            progress_tracker=progress_tracker,
            options=PipelineFactory.create_learning_options(config),
            mode=LearningMode(mode or config.learning.mode),
            learning_fingerprint=config.learning_fingerprint(),
            max_workers=config.run.jobs,
            force=bool(config.run.force),
        )


# Convenience function for easy usage
def create_pipeline(
    config: Optional[ConfigurationManager] = None,
    mode: Optional[Union[str, LearningMode]] = None,
) -> PandemicPipelineOrchestrator:
    """Validate the configuration and build an orchestrator from it"""
    config = (config or ConfigurationManager()).validate()
    return PipelineFactory.create_orchestrator(config, mode)
