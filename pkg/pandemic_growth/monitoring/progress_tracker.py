"""
Progress tracker that reports phases and per-day progress through logging
"""

import logging
import time
from typing import Any, Dict

from ..core.interfaces import IProgressTracker

logger = logging.getLogger(__name__)

LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "SUCCESS": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
}


class ConsoleProgressTracker(IProgressTracker):
    """Logs phase boundaries, progress with ETA and run totals"""

    def __init__(self, every: int = 10):
        self.start_time = time.time()
        self.phase_start_time = self.start_time
        self.current_phase = "Initialization"
        self.items_done = 0
        self.items_total = 0
        self.every = max(1, every)
        self.phase_durations: Dict[str, float] = {}

    def update_progress(self, done: int, total: int, phase: str):
        self.items_done = done
        self.items_total = total
        if phase != self.current_phase:
            self.log_phase_start(phase)

        if total <= 0 or (done % self.every and done != total):
            return
        percentage = done / total * 100
        elapsed = time.time() - self.phase_start_time
        if done > 0:
            eta = self._format_time((total - done) * elapsed / done)
        else:
            eta = "calculating"
        logger.info(f"{phase}: {done}/{total} ({percentage:.1f}%) - ETA {eta}")

    def log_activity(self, message: str, level: str = "INFO"):
        logger.log(LEVELS.get(level, logging.INFO), message)

    def log_phase_start(self, phase: str, description: str = ""):
        self.current_phase = phase
        self.phase_start_time = time.time()
        logger.info(f"Starting phase: {phase}" + (f" ({description})" if description else ""))

    def log_phase_completion(self, phase: str, results: Dict[str, Any]):
        elapsed = time.time() - self.phase_start_time
        self.phase_durations[phase] = elapsed
        details = ", ".join(f"{key}={value}" for key, value in results.items())
        logger.info(f"Phase complete: {phase} in {self._format_time(elapsed)}" + (f" [{details}]" if details else ""))

    def _format_time(self, seconds: float) -> str:
        if seconds < 60:
            return f"{seconds:.1f}s"
        if seconds < 3600:
            return f"{seconds / 60:.1f}m"
        return f"{seconds / 3600:.1f}h"

    def get_performance_metrics(self) -> Dict[str, Any]:
        total_time = time.time() - self.start_time
        return {
            "total_time": total_time,
            "items": self.items_done,
            "items_per_minute": (self.items_done / (total_time / 60)) if total_time > 0 else 0,
            "phases": dict(self.phase_durations),
        }
