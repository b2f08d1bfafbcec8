"""
Core interfaces for the pandemic growth estimator
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd


@dataclass
class DayResult:
    """Data class for the outcome of a per-day task"""
    day: int
    success: bool
    value: Any = None
    error_message: Optional[str] = None
    cached: bool = False
    warnings: List[str] = field(default_factory=list)


class IBetaSource(ABC):
    """Interface for the blending weight used at an anchor day"""

    @abstractmethod
    def beta_for(self, series, k: int) -> float:
        """Blending weight for a forecast anchored at day k"""
        pass

    @abstractmethod
    def describe(self) -> str:
        """Short label written into reports"""
        pass


class IArtifactCache(ABC):
    """Interface for the content-hash keyed artifact cache"""

    @abstractmethod
    def lookup(self, dataset_hash: str, config_hash: str, day: int, mode: str) -> Optional[List[str]]:
        """Paths stored for the key, or None"""
        pass

    @abstractmethod
    def store(self, dataset_hash: str, config_hash: str, day: int, mode: str, paths: List[str]):
        """Record the artifacts produced for the key"""
        pass

    @abstractmethod
    def invalidate(self, dataset_hash: str, config_hash: str):
        """Forget every entry of a (dataset, config) pair"""
        pass


class IReportStorage(ABC):
    """Interface for writing run outputs"""

    @abstractmethod
    def resolve(self, relative: str) -> Path:
        """Absolute path of an output file inside the run directory"""
        pass

    @abstractmethod
    def write_csv(self, relative: str, frame: pd.DataFrame) -> Path:
        """Write a data frame as CSV"""
        pass

    @abstractmethod
    def write_json(self, relative: str, payload: Dict[str, Any]) -> Path:
        """Write a JSON document"""
        pass


class IProgressTracker(ABC):
    """Interface for progress tracking"""

    @abstractmethod
    def update_progress(self, done: int, total: int, phase: str):
        """Update progress information"""
        pass

    @abstractmethod
    def log_activity(self, message: str, level: str = "INFO"):
        """Log activity messages"""
        pass

    @abstractmethod
    def log_phase_start(self, phase: str, description: str = ""):
        """Mark the beginning of a phase"""
        pass

    @abstractmethod
    def log_phase_completion(self, phase: str, results: Dict[str, Any]):
        """Mark the end of a phase with its headline results"""
        pass

    @abstractmethod
    def get_performance_metrics(self) -> Dict[str, Any]:
        """Timing totals for provenance"""
        pass
