"""
Configuration management for the pandemic growth estimator.

A run is configured by a JSON file whose top-level sections map onto the
dataclasses below; command-line flags are applied afterwards and win.
Unknown keys anywhere are rejected.
"""

import copy
import json
from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..betanet.labels import parse_rules
from ..core.errors import ConfigurationError
from ..forecast.beta_sources import parse_beta_spec
from .regions import US_REGIONS, VERMONT_LABEL_RULES

CHANNEL_NAMES = ("cases", "deaths", "recoveries")
LEARNING_MODES = ("quarantined", "interstate", "blended")


@dataclass
class DataConfig:
    """Input dataset and region registry"""
    path: Optional[str] = None
    epoch: str = "2020-03-12"
    regions: List[Dict[str, str]] = field(default_factory=lambda: [{"code": c, "name": n} for c, n in US_REGIONS])
    columns: Dict[str, str] = field(default_factory=lambda: {
        "date": "date",
        "region": "region",
        "total_cases": "total_cases",
        "total_deaths": "total_deaths",
        "total_recoveries": "total_recoveries",
    })
    national_code: str = "US"


@dataclass
class LearningConfig:
    """Gain learning window and solver"""
    n_tau: int = 14
    fit_days: Optional[int] = None
    mode: str = "quarantined"
    weights: Dict[str, float] = field(default_factory=lambda: {name: 1.0 for name in CHANNEL_NAMES})
    ridge: float = 0.0
    nnls: Dict[str, Any] = field(default_factory=lambda: {"tol": 1e-10, "max_iter": None})


@dataclass
class NetworkConfig:
    """Beta network training"""
    hidden: int = 51
    lr: float = 0.01
    epochs: int = 200
    batch: int = 16
    seed: int = 0
    threshold: bool = False
    labels: List[Dict[str, Any]] = field(default_factory=lambda: copy.deepcopy(VERMONT_LABEL_RULES))
    checkpoint: Optional[str] = None


@dataclass
class ForecastConfig:
    """Forecast and evaluation range"""
    beta: str = "fixed:1.0"
    horizons: List[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    from_day: Optional[Union[int, str]] = None
    to_day: Optional[Union[int, str]] = None
    scope: str = "US"
    relearn_each_step: bool = False
    thresholds: List[float] = field(default_factory=lambda: [0.01])


@dataclass
class StabilityConfig:
    """Root finding and unit-disk margin"""
    tol_margin: float = 0.0
    root_tol: float = 1e-8
    max_iter: int = 500


@dataclass
class OutputConfig:
    """Output directory and execution"""
    out: str = "runs"
    jobs: int = 1
    force: bool = False


SECTIONS = {
    "data": DataConfig,
    "learning": LearningConfig,
    "network": NetworkConfig,
    "forecast": ForecastConfig,
    "stability": StabilityConfig,
    "run": OutputConfig,
}

# file key -> attribute name where they differ
KEY_ALIASES = {"forecast": {"from": "from_day", "to": "to_day"}}

NESTED_KEYS = {
    ("learning", "weights"): set(CHANNEL_NAMES),
    ("learning", "nnls"): {"tol", "max_iter"},
    ("data", "columns"): {"date", "region", "total_cases", "total_deaths", "total_recoveries"},
}


class ConfigurationManager:
    """Centralized configuration management"""

    def __init__(self):
        self.data = DataConfig()
        self.learning = LearningConfig()
        self.network = NetworkConfig()
        self.forecast = ForecastConfig()
        self.stability = StabilityConfig()
        self.run = OutputConfig()

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ConfigurationManager":
        manager = cls()
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"Cannot read configuration file {path}: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigurationError("Configuration file must contain a JSON object")
        manager.update_from_dict(payload)
        return manager

    def _attribute(self, section: str, key: str) -> str:
        attribute = KEY_ALIASES.get(section, {}).get(key, key)
        names = {f.name for f in fields(SECTIONS[section])}
        if attribute not in names:
            raise ConfigurationError(f"Unknown configuration key '{section}.{key}'")
        return attribute

    def _set(self, section: str, key: str, value: Any):
        attribute = self._attribute(section, key)
        target = getattr(self, section)
        allowed = NESTED_KEYS.get((section, attribute))
        if allowed is not None:
            if not isinstance(value, dict):
                raise ConfigurationError(f"'{section}.{key}' must be an object")
            unknown = set(value) - allowed
            if unknown:
                raise ConfigurationError(f"Unknown keys in '{section}.{key}': {', '.join(sorted(unknown))}")
            merged = dict(getattr(target, attribute))
            merged.update(value)
            value = merged
        setattr(target, attribute, value)

    def update_from_dict(self, config_dict: Dict[str, Any]):
        """Update configuration from a nested dictionary"""
        for section, values in config_dict.items():
            if section not in SECTIONS:
                raise ConfigurationError(f"Unknown configuration section '{section}'")
            if not isinstance(values, dict):
                raise ConfigurationError(f"Section '{section}' must be an object")
            for key, value in values.items():
                self._set(section, key, value)

    def apply_overrides(self, overrides: Dict[str, Any]):
        """Apply dotted `section.key` overrides; None values are skipped"""
        for dotted, value in overrides.items():
            if value is None:
                continue
            section, _, key = dotted.partition(".")
            if section not in SECTIONS or not key:
                raise ConfigurationError(f"Invalid override '{dotted}'")
            self._set(section, key, value)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to a dictionary with file keys"""
        result = {}
        for section, cls in SECTIONS.items():
            reverse = {v: k for k, v in KEY_ALIASES.get(section, {}).items()}
            target = getattr(self, section)
            result[section] = {reverse.get(f.name, f.name): copy.deepcopy(getattr(target, f.name)) for f in fields(cls)}
        return result

    @property
    def fit_days(self) -> int:
        return self.learning.fit_days if self.learning.fit_days is not None else self.learning.n_tau

    def epoch_date(self) -> date:
        try:
            return date.fromisoformat(str(self.data.epoch))
        except ValueError as exc:
            raise ConfigurationError(f"Invalid epoch date '{self.data.epoch}'") from exc

    @staticmethod
    def _number(value, name: str, kind=float):
        if isinstance(value, bool):
            raise ConfigurationError(f"{name} must be a number, got {value!r}")
        try:
            return kind(value)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"{name} must be a number, got {value!r}") from exc

    def validate(self):
        """Raise ConfigurationError on the first invalid value"""
        self.epoch_date()
        learning = self.learning
        if not isinstance(learning.n_tau, int) or learning.n_tau < 1:
            raise ConfigurationError(f"learning.n_tau must be a positive integer, got {learning.n_tau}")
        if learning.fit_days is not None and (not isinstance(learning.fit_days, int) or learning.fit_days < 1):
            raise ConfigurationError(f"learning.fit_days must be a positive integer, got {learning.fit_days}")
        if learning.mode not in LEARNING_MODES:
            raise ConfigurationError(f"learning.mode must be one of {', '.join(LEARNING_MODES)}")
        if any(self._number(w, f"learning.weights.{key}") <= 0 for key, w in learning.weights.items()):
            raise ConfigurationError("learning.weights must be positive")
        if self._number(learning.ridge, "learning.ridge") < 0:
            raise ConfigurationError("learning.ridge must be >= 0")
        if self._number(learning.nnls.get("tol", 0), "learning.nnls.tol") <= 0:
            raise ConfigurationError("learning.nnls.tol must be > 0")
        max_iter = learning.nnls.get("max_iter")
        if max_iter is not None and self._number(max_iter, "learning.nnls.max_iter", int) < 1:
            raise ConfigurationError("learning.nnls.max_iter must be >= 1")

        if not self.data.regions:
            raise ConfigurationError("data.regions must not be empty")
        for entry in self.data.regions:
            if set(entry) != {"code", "name"}:
                raise ConfigurationError(f"Region entries need exactly 'code' and 'name', got {entry}")

        network = self.network
        hidden, batch = self._number(network.hidden, "network.hidden", int), self._number(network.batch, "network.batch", int)
        epochs, lr = self._number(network.epochs, "network.epochs", int), self._number(network.lr, "network.lr")
        if hidden < 1 or batch < 1 or epochs < 0 or lr <= 0:
            raise ConfigurationError("network.hidden and network.batch must be >= 1, epochs >= 0, lr > 0")

        forecast = self.forecast
        if not forecast.horizons:
            raise ConfigurationError("forecast.horizons must not be empty")
        for m in forecast.horizons:
            if not isinstance(m, int) or not 1 <= m <= learning.n_tau:
                raise ConfigurationError(f"forecast.horizons entries must lie in 1..n_tau={learning.n_tau}, got {m}")
        if any(self._number(t, "forecast.thresholds") <= 0 for t in forecast.thresholds):
            raise ConfigurationError("forecast.thresholds must be positive")

        if not 0 <= self._number(self.stability.tol_margin, "stability.tol_margin") < 1:
            raise ConfigurationError("stability.tol_margin must lie in [0, 1)")
        root_tol = self._number(self.stability.root_tol, "stability.root_tol")
        if root_tol <= 0 or self._number(self.stability.max_iter, "stability.max_iter", int) < 1:
            raise ConfigurationError("stability.root_tol must be > 0 and max_iter >= 1")

        if not isinstance(self.run.jobs, int) or self.run.jobs < 1:
            raise ConfigurationError(f"run.jobs must be a positive integer, got {self.run.jobs}")

        parse_beta_spec(forecast.beta)
        parse_rules(network.labels)
        return self

    def learning_fingerprint(self) -> Dict[str, Any]:
        """Every setting that changes learned gains"""
        return {
            "epoch": self.data.epoch,
            "regions": self.data.regions,
            "columns": self.data.columns,
            "n_tau": self.learning.n_tau,
            "fit_days": self.fit_days,
            "weights": self.learning.weights,
            "ridge": self.learning.ridge,
            "nnls": self.learning.nnls,
        }
