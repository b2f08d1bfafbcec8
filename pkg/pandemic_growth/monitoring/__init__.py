"""
Monitoring domain - handles progress reporting.
"""

from .progress_tracker import ConsoleProgressTracker

__all__ = ["ConsoleProgressTracker"]
