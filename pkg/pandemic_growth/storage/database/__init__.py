"""
Persistent caches.
"""

from .sqlite_manager import SQLiteArtifactCache

__all__ = ["SQLiteArtifactCache"]
