import numpy as np
import pytest
from numpy.testing import assert_array_equal

from pandemic_growth.core.errors import (
    GapInSeries, HeaderMismatch, InsufficientHistory, MissingRegion, NegativeTotal, UnparseableRow,
)
from pandemic_growth.timeseries import (
    CleaningMode, ColumnSchema, PandemicSeries, RegionRegistry, ValidationReport, active_cases, export_csv,
    increments, ingest_csv, lagged_actives, window,
)

from conftest import EPOCH


def one_region():
    return RegionRegistry([("VT", "Vermont")])


def write(path, rows, header="date,region,total_cases,total_deaths,total_recoveries"):
    path.write_text("\n".join([header] + rows) + "\n", encoding="utf-8")
    return path


def series_of(registry, calendar, totals):
    return PandemicSeries(registry, calendar, np.asarray(totals, dtype=np.float64))


class TestIngest:
    def test_three_rows_one_region(self, tmp_path):
        path = write(tmp_path / "in.csv", [
            "2020-03-12,VT,10,0,0",
            "2020-03-13,VT,12,1,0",
            "2020-03-14,VT,15,1,2",
        ])
        series = ingest_csv(path, one_region(), EPOCH)
        assert series.horizon == 3
        assert_array_equal(series.channel("VT", "cases"), [10, 12, 15])
        assert_array_equal(series.channel("VT", "deaths"), [0, 1, 1])
        assert_array_equal(series.channel("VT", "recoveries"), [0, 0, 2])
        assert not series.recoveries_synthetic

    def test_gap_is_rejected(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10,0,0", "2020-03-14,VT,15,1,2"])
        with pytest.raises(GapInSeries) as info:
            ingest_csv(path, one_region(), EPOCH)
        assert info.value.region == "VT"
        assert info.value.missing_day.isoformat() == "2020-03-13"

    def test_duplicate_keeps_last_row(self, tmp_path):
        path = write(tmp_path / "in.csv", [
            "2020-03-12,VT,10,0,0",
            "2020-03-13,VT,11,0,0",
            "2020-03-13,VT,12,1,0",
        ])
        report = ValidationReport()
        series = ingest_csv(path, one_region(), EPOCH, report=report)
        assert_array_equal(series.channel("VT", "cases"), [10, 12])
        assert report.duplicate_rows == [{"line": 3, "region": "VT", "date": "2020-03-13"}]
        assert report.has_warnings

    def test_missing_region(self, tmp_path, registry):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10,0,0", "2020-03-12,NY,10,0,0"])
        with pytest.raises(MissingRegion) as info:
            ingest_csv(path, registry, EPOCH)
        assert info.value.codes == ["CA"]

    def test_unknown_region_names_the_line(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10,0,0", "2020-03-12,XX,1,0,0"])
        with pytest.raises(UnparseableRow) as info:
            ingest_csv(path, one_region(), EPOCH)
        assert info.value.line == 3

    def test_negative_total(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10,-1,0"])
        with pytest.raises(NegativeTotal) as info:
            ingest_csv(path, one_region(), EPOCH)
        assert info.value.column == "total_deaths"
        assert info.value.line == 2

    def test_header_mismatch(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10"], header="date,region,total_cases")
        with pytest.raises(HeaderMismatch) as info:
            ingest_csv(path, one_region(), EPOCH)
        assert info.value.missing == ["total_deaths"]

    def test_missing_recoveries_are_synthetic(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10,1", "2020-03-13,VT,12,1"],
                     header="date,region,total_cases,total_deaths")
        series = ingest_csv(path, one_region(), EPOCH)
        assert series.recoveries_synthetic
        assert_array_equal(series.channel("VT", "recoveries"), [0, 0])

    def test_rows_before_epoch_are_dropped(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-11,VT,5,0,0", "2020-03-12,VT,10,0,0"])
        report = ValidationReport()
        series = ingest_csv(path, one_region(), EPOCH, report=report)
        assert series.horizon == 1
        assert report.dropped_before_epoch == 1

    def test_custom_column_names(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,10,0,0"], header="day,state,cases,deaths,recovered")
        schema = ColumnSchema(date="day", region="state", total_cases="cases", total_deaths="deaths",
                              total_recoveries="recovered")
        series = ingest_csv(path, one_region(), EPOCH, schema)
        assert series.state("VT", 1).tolist() == [10.0, 0.0, 0.0]

    def test_export_reingests_bit_exact(self, tmp_path, planted_series):
        path = export_csv(planted_series, tmp_path / "normalized.csv")
        again = ingest_csv(path, planted_series.registry, EPOCH)
        assert again.content_hash() == planted_series.content_hash()

    def test_fractional_totals_reingest_bit_exact(self, tmp_path, calendar):
        registry = RegionRegistry([("NY", "New York"), ("VT", "Vermont")])
        rng = np.random.default_rng(12)
        totals = np.cumsum(rng.uniform(0.0, 50.0, size=(2, 30, 3)), axis=1)
        totals[:, :, 0] += totals[:, :, 1] + totals[:, :, 2]
        series = series_of(registry, calendar, totals)
        again = ingest_csv(export_csv(series, tmp_path / "normalized.csv"), registry, EPOCH)
        assert_array_equal(again.totals, series.totals)


class TestDerivedQuantities:
    @pytest.mark.parametrize("totals, expected", [((100, 10, 20), 70), ((0, 0, 0), 0), ((5, 3, 4), -2)])
    def test_active_cases(self, calendar, totals, expected):
        series = series_of(one_region(), calendar, [[totals]])
        assert active_cases(series, "VT", 1) == expected

    def test_negative_active_is_reported(self, tmp_path):
        path = write(tmp_path / "in.csv", ["2020-03-12,VT,5,3,4"])
        report = ValidationReport()
        ingest_csv(path, one_region(), EPOCH, report=report)
        assert report.negative_actives[0]["active"] == -2.0

    def test_raw_increments(self, calendar):
        series = series_of(one_region(), calendar, [[(10, 0, 0), (12, 0, 0), (15, 0, 0)]])
        assert_array_equal(increments(series).new_cases(0), [2, 3])

    def test_clamped_increments(self, calendar):
        series = series_of(one_region(), calendar, [[(10, 0, 0), (9, 0, 0)]])
        clamped = increments(series, CleaningMode.CLAMP)
        assert_array_equal(clamped.new_cases(0), [0])
        assert clamped.clamped_count == 1
        assert_array_equal(increments(series, CleaningMode.RAW).new_cases(0), [-1])

    def test_window_boundaries(self, calendar):
        totals = [[(k, 0, 0) for k in range(1, 21)]]
        series = series_of(one_region(), calendar, totals)
        assert_array_equal(window(series, 14, 14)[0, :, 0], np.arange(1, 15))
        assert_array_equal(window(series, 20, 3)[0, :, 0], [18, 19, 20])
        with pytest.raises(InsufficientHistory):
            window(series, 14, 15)

    def test_lagged_actives_put_newest_first(self):
        history = np.array([[[1.0, 0, 0], [2.0, 0, 0], [3.0, 0, 0]]])
        assert_array_equal(lagged_actives(history), [[3.0, 2.0, 1.0]])

    def test_registry_sorts_by_name(self, registry):
        assert registry.codes == ["CA", "NY", "VT"]
        assert registry.get("VT").index == 3

    def test_aggregate_sums_regions(self, planted_series):
        national = planted_series.aggregate("US", "United States")
        assert national.n_regions == 1
        assert_array_equal(national.states(10)[0], planted_series.states(10).sum(axis=0))

    def test_truncated_keeps_prefix(self, planted_series):
        cut = planted_series.truncated(12)
        assert cut.horizon == 12
        assert_array_equal(cut.states(12), planted_series.states(12))
