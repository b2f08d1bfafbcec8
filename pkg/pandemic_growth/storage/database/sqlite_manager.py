"""
SQLite cache of learned-gain artifacts keyed by content hashes
"""

import json
import logging
import sqlite3
from pathlib import Path
from typing import List, Optional, Union

from ...core.interfaces import IArtifactCache

logger = logging.getLogger(__name__)


class SQLiteArtifactCache(IArtifactCache):
    """Maps (dataset hash, config hash, day, mode) to the files written for it"""

    def __init__(self, db_path: Union[str, Path] = "artifacts.db"):
        self.db_path = str(db_path)
        self._init_db()

    def _get_connection(self):
        return sqlite3.connect(self.db_path, timeout=30)

    def _init_db(self):
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS artifacts (
                dataset_hash TEXT NOT NULL,
                config_hash TEXT NOT NULL,
                day INTEGER NOT NULL,
                mode TEXT NOT NULL,
                paths TEXT NOT NULL,
                created TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                PRIMARY KEY (dataset_hash, config_hash, day, mode)
            )
        ''')
        cursor.execute('CREATE INDEX IF NOT EXISTS idx_artifacts_run ON artifacts (dataset_hash, config_hash)')
        conn.commit()
        conn.close()

    def lookup(self, dataset_hash: str, config_hash: str, day: int, mode: str) -> Optional[List[str]]:
        """Stored paths, or None when absent or when any file has disappeared"""
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute(
            'SELECT paths FROM artifacts WHERE dataset_hash = ? AND config_hash = ? AND day = ? AND mode = ?',
            (dataset_hash, config_hash, int(day), mode),
        )
        row = cursor.fetchone()
        conn.close()
        if row is None:
            return None
        paths = json.loads(row[0])
        if not all(Path(p).is_file() for p in paths):
            logger.debug(f"Cache entry for day {day} points at missing files, ignoring it")
            return None
        return paths

    def store(self, dataset_hash: str, config_hash: str, day: int, mode: str, paths: List[str]):
        conn = self._get_connection()
        conn.execute(
            'INSERT OR REPLACE INTO artifacts (dataset_hash, config_hash, day, mode, paths) VALUES (?, ?, ?, ?, ?)',
            (dataset_hash, config_hash, int(day), mode, json.dumps([str(p) for p in paths])),
        )
        conn.commit()
        conn.close()

    def invalidate(self, dataset_hash: str, config_hash: str):
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute('DELETE FROM artifacts WHERE dataset_hash = ? AND config_hash = ?', (dataset_hash, config_hash))
        removed = cursor.rowcount
        conn.commit()
        conn.close()
        logger.info(f"Invalidated {removed} cached artifact(s)")

    def cached_days(self, dataset_hash: str, config_hash: str, mode: str) -> List[int]:
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute(
            'SELECT day FROM artifacts WHERE dataset_hash = ? AND config_hash = ? AND mode = ? ORDER BY day',
            (dataset_hash, config_hash, mode),
        )
        days = [row[0] for row in cursor.fetchall()]
        conn.close()
        return days
