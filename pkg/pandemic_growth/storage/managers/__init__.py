"""
Output managers.
"""

from .report_manager import ReportStorageManager

__all__ = ["ReportStorageManager"]
