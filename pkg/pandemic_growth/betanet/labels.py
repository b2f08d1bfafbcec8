"""
Label rules and the labeled windows built from them.
"""

import logging
from dataclasses import dataclass
from datetime import date
from typing import Any, Dict, Iterable, List, Union

import numpy as np

from ..core.errors import ConfigurationError
from ..timeseries.series import PandemicSeries
from .network import window_features

logger = logging.getLogger(__name__)

TEST_LABEL = "test"


@dataclass(frozen=True)
class LabelRule:
    """Days start..end (inclusive) of `region` carry `label` (1, 0 or "test")"""
    region: str
    start: date
    end: date
    label: Union[int, str]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LabelRule":
        unknown = set(data) - {"region", "start", "end", "label"}
        if unknown:
            raise ConfigurationError(f"Unknown label rule keys: {', '.join(sorted(unknown))}")
        try:
            start = date.fromisoformat(str(data["start"]))
            end = date.fromisoformat(str(data["end"]))
            label = data["label"]
            region = str(data["region"])
        except (KeyError, ValueError) as exc:
            raise ConfigurationError(f"Invalid label rule {data}: {exc}") from exc
        if label not in (0, 1, TEST_LABEL):
            raise ConfigurationError(f"Label must be 0, 1 or '{TEST_LABEL}', got {label!r}")
        if end < start:
            raise ConfigurationError(f"Label rule ends before it starts: {data}")
        return cls(region, start, end, label)

    def to_dict(self) -> Dict[str, Any]:
        return {"region": self.region, "start": self.start.isoformat(), "end": self.end.isoformat(), "label": self.label}

    @property
    def is_test(self) -> bool:
        return self.label == TEST_LABEL


@dataclass(frozen=True)
class LabeledDataset:
    """features (N, 3 * n_tau * R), binary labels (N,), and the day of each window"""
    features: np.ndarray
    labels: np.ndarray
    days: np.ndarray

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def has_both_labels(self) -> bool:
        return bool(np.any(self.labels == 1) and np.any(self.labels == 0))


def parse_rules(rules: Iterable[Union[LabelRule, Dict[str, Any]]]) -> List[LabelRule]:
    return [rule if isinstance(rule, LabelRule) else LabelRule.from_dict(rule) for rule in rules]


def rule_days(series: PandemicSeries, rule: LabelRule, n_tau: int) -> List[int]:
    """Days of the rule that have a full window inside the series"""
    first = max(series.calendar.to_day(rule.start), n_tau)
    last = min(series.calendar.to_day(rule.end), series.horizon)
    skipped = (series.calendar.to_day(rule.end) - series.calendar.to_day(rule.start) + 1) - max(0, last - first + 1)
    if skipped > 0:
        logger.info(f"Label rule {rule.start}..{rule.end}: {skipped} day(s) outside the usable range")
    return list(range(first, last + 1))


def build_dataset(series: PandemicSeries, rules: Iterable[LabelRule], n_tau: int) -> LabeledDataset:
    """Labeled windows for every training rule (test rules are skipped)"""
    features, labels, days = [], [], []
    for rule in parse_rules(rules):
        if rule.is_test:
            continue
        if not series.registry.contains(rule.region):
            raise ConfigurationError(f"Label rule region '{rule.region}' is not in the registry")
        for k in rule_days(series, rule, n_tau):
            features.append(window_features(series, k, n_tau))
            labels.append(float(rule.label))
            days.append(k)

    width = 3 * n_tau * series.n_regions
    return LabeledDataset(
        features=np.array(features, dtype=np.float64).reshape(-1, width),
        labels=np.array(labels, dtype=np.float64),
        days=np.array(days, dtype=np.int64),
    )


def held_out_days(series: PandemicSeries, rules: Iterable[LabelRule], n_tau: int) -> Dict[str, List[int]]:
    """Held-out days per region"""
    held_out: Dict[str, List[int]] = {}
    for rule in parse_rules(rules):
        if rule.is_test:
            held_out.setdefault(rule.region, []).extend(rule_days(series, rule, n_tau))
    return held_out
