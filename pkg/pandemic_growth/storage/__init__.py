"""
Storage domain - handles run output files and the artifact cache.
"""

from .managers.report_manager import ReportStorageManager, canonical_json, config_hash, content_hash
from .database.sqlite_manager import SQLiteArtifactCache

__all__ = ["ReportStorageManager", "canonical_json", "config_hash", "content_hash", "SQLiteArtifactCache"]
