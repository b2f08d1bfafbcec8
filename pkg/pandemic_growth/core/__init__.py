"""
Core domain - interfaces, the exception tree and the pipeline orchestrator.
"""

from .errors import (
    ConfigurationError, DimensionMismatch, Divergence, EmptyReport, GapInSeries, HeaderMismatch,
    HorizonTooLong, IngestionError, InsufficientHistory, MissingRegion, NegativeTotal, NonConvergence,
    OutOfRange, PandemicGrowthError, UnparseableRow,
)
from .interfaces import DayResult, IArtifactCache, IBetaSource, IProgressTracker, IReportStorage

__all__ = [
    "ConfigurationError", "DimensionMismatch", "Divergence", "EmptyReport", "GapInSeries", "HeaderMismatch",
    "HorizonTooLong", "IngestionError", "InsufficientHistory", "MissingRegion", "NegativeTotal",
    "NonConvergence", "OutOfRange", "PandemicGrowthError", "UnparseableRow",
    "DayResult", "IArtifactCache", "IBetaSource", "IProgressTracker", "IReportStorage",
]
