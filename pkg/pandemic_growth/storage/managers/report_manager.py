"""
Output-directory writer: every file of a run goes through here
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from ...core.errors import ConfigurationError
from ...core.interfaces import IReportStorage

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _json_default(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default, allow_nan=False)


def content_hash(data: Union[bytes, str]) -> str:
    """SHA-256 hex digest"""
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def config_hash(section: Dict[str, Any]) -> str:
    return content_hash(json.dumps(section, sort_keys=True, default=_json_default))


class ReportStorageManager(IReportStorage):
    """Confines all writes to one output directory"""

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir).resolve()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.written = []

    def resolve(self, relative: str) -> Path:
        target = (self.out_dir / relative).resolve()
        if target != self.out_dir and self.out_dir not in target.parents:
            raise ConfigurationError(f"Refusing to write outside the output directory: {relative}")
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def _record(self, path: Path) -> Path:
        self.written.append(path)
        logger.debug(f"Wrote {path.relative_to(self.out_dir)}")
        return path

    def write_csv(self, relative: str, frame: pd.DataFrame) -> Path:
        path = self.resolve(relative)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
        return self._record(path)

    def write_json(self, relative: str, payload: Dict[str, Any]) -> Path:
        path = self.resolve(relative)
        path.write_text(canonical_json(payload) + "\n", encoding="utf-8")
        return self._record(path)

    def write_text(self, relative: str, text: str) -> Path:
        path = self.resolve(relative)
        path.write_text(text, encoding="utf-8")
        return self._record(path)

    def exists(self, relative: str) -> bool:
        return (self.out_dir / relative).is_file()

    def file_hash(self, relative: str) -> str:
        return content_hash(self.resolve(relative).read_bytes())
