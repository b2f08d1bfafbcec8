import json

import pandas as pd
import pytest

from pandemic_growth.cli import EXIT_DATA_ERROR, EXIT_OK, EXIT_WARNINGS, build_parser, run_command
from pandemic_growth.main import main


def run(*argv):
    return run_command(build_parser().parse_args(list(argv)))


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def edit_config(path, **sections):
    config = read_json(path)
    for section, values in sections.items():
        config.setdefault(section, {}).update(values)
    path.write_text(json.dumps(config), encoding="utf-8")


class TestIngestCommand:
    def test_clean_input(self, run_config):
        config, out = run_config
        assert main(["ingest", "--config", str(config)]) == EXIT_OK
        for name in ("dataset.csv", "validation_report.json", "resolved_config.json", "provenance.json"):
            assert (out / name).is_file()
        assert read_json(out / "resolved_config.json")["learning"]["n_tau"] == 4
        assert read_json(out / "provenance.json")["command"] == "ingest"

    def test_duplicate_rows_are_warnings(self, run_config):
        config, out = run_config
        data = read_json(config)["data"]["path"]
        with open(data, encoding="utf-8") as handle:
            repeated = handle.read().splitlines()[5]
        with open(data, "a", encoding="utf-8") as handle:
            handle.write(repeated + "\n")
        assert run("ingest", "--config", str(config)) == EXIT_WARNINGS
        assert len(read_json(out / "validation_report.json")["duplicate_rows"]) == 1

    def test_missing_region_is_a_data_error(self, run_config):
        config, _ = run_config
        regions = read_json(config)["data"]["regions"] + [{"code": "TX", "name": "Texas"}]
        edit_config(config, data={"regions": regions})
        assert run("ingest", "--config", str(config)) == EXIT_DATA_ERROR

    def test_missing_data_path(self, tmp_path):
        assert run("ingest", "--out", str(tmp_path / "out")) == EXIT_DATA_ERROR

    def test_unknown_config_key(self, run_config):
        config, _ = run_config
        edit_config(config, learning={"lags": 3})
        assert run("ingest", "--config", str(config)) == EXIT_DATA_ERROR


class TestLearnCommand:
    def test_gains_are_written_and_reused(self, run_config):
        config, out = run_config
        assert run("learn", "--config", str(config), "--from", "8", "--to", "12") == EXIT_OK
        files = sorted(p.name for p in (out / "gains" / "regions").glob("day_*.csv"))
        assert files == [f"day_{k}.csv" for k in (10, 11, 12, 8, 9)]
        first = (out / "gains" / "regions" / "day_10.csv").read_bytes()
        assert read_json(out / "provenance.json")["cache_hits"] == 0

        assert run("learn", "--config", str(config), "--from", "8", "--to", "12") == EXIT_OK
        assert read_json(out / "provenance.json")["cache_hits"] == 5
        assert (out / "gains" / "regions" / "day_10.csv").read_bytes() == first

        assert run("learn", "--config", str(config), "--from", "8", "--to", "12", "--force") == EXIT_OK
        assert read_json(out / "provenance.json")["cache_hits"] == 0

    def test_day_before_first_learnable(self, run_config):
        config, _ = run_config
        assert run("learn", "--config", str(config), "--from", "7", "--to", "9") == EXIT_DATA_ERROR

    def test_day_past_the_data(self, run_config):
        config, _ = run_config
        assert run("learn", "--config", str(config), "--from", "8", "--to", "41") == EXIT_DATA_ERROR

    def test_national_scope(self, run_config):
        config, out = run_config
        assert run("learn", "--config", str(config), "--scope", "US", "--from", "8", "--to", "9") == EXIT_OK
        assert (out / "gains" / "US" / "day_9.csv").is_file()

    def test_unknown_scope(self, run_config):
        config, _ = run_config
        assert run("learn", "--config", str(config), "--scope", "ZZ") == EXIT_DATA_ERROR

    def test_underdetermined_interstate_fit_warns(self, run_config):
        config, out = run_config
        assert run("learn", "--config", str(config), "--mode", "interstate", "--from", "8", "--to", "8") == EXIT_WARNINGS
        assert read_json(out / "learn_summary.json")["diagnostics"]["underdetermined"] == 9


class TestEvalCommand:
    def test_planted_data_is_forecast_exactly(self, run_config):
        config, out = run_config
        assert run("eval", "--config", str(config), "--from", "8", "--to", "20") == EXIT_OK
        summary = read_json(out / "summary.json")
        assert summary["records"] == 13 * 2 * 4 * 3
        assert summary["beta_mode"] == "fixed:1"
        assert all(group["max_abs"] < 1e-6 for group in summary["groups"])
        errors = pd.read_csv(out / "errors.csv")
        assert (errors["k"] - errors["horizon"]).between(8, 20).all()
        assert (out / "plot.csv").is_file()

    def test_worker_count_does_not_change_outputs(self, run_config, tmp_path):
        config, _ = run_config
        outputs = []
        for jobs in ("1", "2"):
            out = tmp_path / f"jobs_{jobs}"
            assert run("eval", "--config", str(config), "--from", "8", "--to", "16",
                       "--jobs", jobs, "--out", str(out)) == EXIT_OK
            outputs.append(out)
        for name in ("errors.csv", "summary.json", "plot.csv", "gains/regions/day_12.csv"):
            assert (outputs[0] / name).read_bytes() == (outputs[1] / name).read_bytes()

    def test_cached_rerun_writes_identical_reports(self, run_config):
        config, out = run_config
        assert run("eval", "--config", str(config), "--from", "8", "--to", "20") == EXIT_OK
        first = {name: (out / name).read_bytes() for name in ("errors.csv", "summary.json", "plot.csv")}
        assert run("eval", "--config", str(config), "--from", "8", "--to", "20") == EXIT_OK
        assert read_json(out / "provenance.json")["cache_hits"] == 13
        for name, content in first.items():
            assert (out / name).read_bytes() == content

    def test_default_range_stops_before_the_last_target(self, run_config):
        config, out = run_config
        edit_config(config, forecast={"horizons": [2]})
        assert run("eval", "--config", str(config), "--scope", "VT") == EXIT_OK
        errors = pd.read_csv(out / "errors.csv")
        assert errors["k"].max() == 40
        assert set(errors["scope"]) == {"VT"}


class TestPredictCommand:
    def test_forecasts_run_past_the_data(self, run_config):
        config, out = run_config
        assert run("predict", "--config", str(config), "--from", "36", "--to", "40") == EXIT_OK
        predictions = pd.read_csv(out / "predictions.csv")
        assert len(predictions) == 5 * 2 * 4
        assert predictions["k"].max() == 42
        assert read_json(out / "provenance.json")["predictions"]["anchors"] == 5


class TestStabilityCommand:
    def test_periodic_gains_sit_on_the_unit_circle(self, run_config):
        config, out = run_config
        assert run("stability", "--config", str(config), "--from", "8", "--to", "12", "--tol-margin", "0.001") == EXIT_OK
        scopes = read_json(out / "stability_summary.json")["scopes"]
        assert [s["scope"] for s in scopes] == ["CA", "NY", "VT"]
        assert all(s["k_s"] is None and s["unstable_days"] == 5 for s in scopes)
        frame = pd.read_csv(out / "stability.csv")
        assert len(frame) == 3 * 5 * 4
        assert frame["magnitude"].between(1 - 1e-6, 1 + 1e-6).all()

    def test_single_region_scope(self, run_config):
        config, out = run_config
        edit_config(config, forecast={"scope": "NY"})
        assert run("stability", "--config", str(config), "--from", "8", "--to", "9", "--tol-margin", "0.001") == EXIT_OK
        (summary,) = read_json(out / "stability_summary.json")["scopes"]
        assert summary["scope"] == "NY"
        assert set(pd.read_csv(out / "stability.csv")["scope"]) == {"NY"}


class TestTrainBetaCommand:
    def test_trains_and_scores_held_out_days(self, run_config):
        config, out = run_config
        edit_config(config, network={
            "hidden": 4,
            "epochs": 10,
            "labels": [
                {"region": "VT", "start": "2020-03-12", "end": "2020-03-20", "label": 1},
                {"region": "VT", "start": "2020-03-21", "end": "2020-03-25", "label": 0},
                {"region": "VT", "start": "2020-03-26", "end": "2020-03-30", "label": "test"},
            ],
        })
        # blended learning includes the underdetermined interstate fits
        assert run("train-beta", "--config", str(config)) == EXIT_WARNINGS
        assert (out / "betanet" / "network.json").is_file()
        training = read_json(out / "betanet" / "training.json")
        assert len(training["loss_curve"]) == 11
        held_out = read_json(out / "betanet" / "test_summary.json")
        assert held_out["thresholds"] == [0.0001, 0.01]
        assert set(pd.read_csv(out / "betanet" / "test_errors.csv")["scope"]) == {"VT"}

    def test_trained_network_drives_eval(self, run_config):
        config, out = run_config
        edit_config(config, network={
            "hidden": 4,
            "epochs": 5,
            "labels": [
                {"region": "VT", "start": "2020-03-12", "end": "2020-03-16", "label": 1},
                {"region": "VT", "start": "2020-03-17", "end": "2020-03-20", "label": 0},
            ],
        })
        code = run("eval", "--config", str(config), "--mode", "blended", "--train-beta", "--from", "20", "--to", "22")
        assert code == EXIT_WARNINGS
        assert read_json(out / "summary.json")["beta_mode"] == "network:trained"


@pytest.mark.parametrize("argv", [["learn", "--horizons", "1,x"], ["bogus"], []])
def test_bad_command_lines_exit_through_argparse(argv):
    with pytest.raises(SystemExit):
        build_parser().parse_args(argv)
