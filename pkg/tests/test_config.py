import json

import pytest

from pandemic_growth.config import US_REGIONS, ConfigurationManager
from pandemic_growth.core.errors import ConfigurationError


def manager_from(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return ConfigurationManager.from_file(path)


class TestConfigurationManager:
    def test_defaults(self):
        config = ConfigurationManager().validate()
        assert config.learning.n_tau == 14
        assert config.fit_days == 14
        assert config.forecast.beta == "fixed:1.0"
        assert len(config.data.regions) == len(US_REGIONS) == 51

    def test_file_values_and_aliases(self, tmp_path):
        config = manager_from(tmp_path, {"learning": {"n_tau": 7, "fit_days": 10}, "forecast": {"from": "2020-05-01"}})
        assert config.learning.n_tau == 7
        assert config.fit_days == 10
        assert config.forecast.from_day == "2020-05-01"
        assert config.to_dict()["forecast"]["from"] == "2020-05-01"

    def test_nested_sections_merge(self, tmp_path):
        config = manager_from(tmp_path, {"learning": {"weights": {"deaths": 4.0}}})
        assert config.learning.weights == {"cases": 1.0, "deaths": 4.0, "recoveries": 1.0}

    @pytest.mark.parametrize("payload", [
        {"learnin": {}},
        {"learning": {"n_taus": 3}},
        {"learning": {"weights": {"hospital": 1.0}}},
        {"learning": 3},
    ])
    def test_unknown_keys_rejected(self, tmp_path, payload):
        with pytest.raises(ConfigurationError):
            manager_from(tmp_path, payload)

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            ConfigurationManager.from_file(path)

    def test_overrides_win_and_none_is_skipped(self, tmp_path):
        config = manager_from(tmp_path, {"learning": {"n_tau": 7}, "run": {"jobs": 3}})
        config.apply_overrides({"learning.n_tau": 5, "run.jobs": None, "forecast.to": "40"})
        assert config.learning.n_tau == 5
        assert config.run.jobs == 3
        assert config.forecast.to_day == "40"

    def test_invalid_override(self):
        with pytest.raises(ConfigurationError):
            ConfigurationManager().apply_overrides({"nosection": 1})

    @pytest.mark.parametrize("dotted, value", [
        ("learning.n_tau", 0),
        ("learning.mode", "sideways"),
        ("learning.ridge", -1.0),
        ("forecast.horizons", [15]),
        ("forecast.horizons", []),
        ("forecast.beta", "fixed:abc"),
        ("forecast.beta", "sometimes"),
        ("stability.tol_margin", 1.0),
        ("run.jobs", 0),
        ("data.epoch", "March 12"),
        ("network.lr", 0.0),
        ("network.hidden", "wide"),
        ("learning.ridge", "lots"),
        ("learning.nnls", {"tol": 1e-10, "max_iter": "many"}),
        ("learning.weights", {"cases": "heavy", "deaths": 1.0, "recoveries": 1.0}),
        ("forecast.thresholds", ["tight"]),
        ("stability.root_tol", "small"),
    ])
    def test_validation(self, dotted, value):
        config = ConfigurationManager()
        config.apply_overrides({dotted: value})
        with pytest.raises(ConfigurationError):
            config.validate()

    def test_fingerprint_ignores_forecast_settings(self):
        first, second = ConfigurationManager(), ConfigurationManager()
        second.apply_overrides({"forecast.horizons": [1], "run.jobs": 4, "learning.mode": "blended"})
        assert first.learning_fingerprint() == second.learning_fingerprint()
        second.apply_overrides({"learning.ridge": 0.5})
        assert first.learning_fingerprint() != second.learning_fingerprint()
