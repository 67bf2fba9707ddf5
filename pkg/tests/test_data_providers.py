import narwhals as nw
import pandas as pd
import polars as pl
import pytest

from data_providers import (ReportDataProviderForPandas, ReportDataProviderForPolars, fit_log_log_rate,
                            is_strictly_decreasing, load_run_config, provider_for, summarize_column, tail_rows)
from numeric_core import ConfigError, FitFailure

PROVIDERS = [ReportDataProviderForPandas, ReportDataProviderForPolars]

RECORDS = [{"n": 8, "error": "0.1", "ratio": "1.1"},
           {"n": 16, "error": "0.05", "ratio": "1.05"},
           {"n": 32, "error": "0.025", "ratio": "1.025"},
           {"n": 64, "error": "0.0125", "ratio": "1.0125"}]


@pytest.fixture(params=PROVIDERS, ids=["pandas", "polars"])
def provider(request):
    return request.param


class TestReportDataProvider:

    def test_backend_lookup(self):
        assert provider_for("pandas") is ReportDataProviderForPandas
        assert provider_for("polars") is ReportDataProviderForPolars
        with pytest.raises(ConfigError):
            provider_for("duckdb")

    def test_from_records(self, provider):
        frame = provider.from_records(RECORDS, provider.get_convergence_schema)
        assert list(frame.columns) == ["n", "error", "ratio"]
        assert len(frame) == 4

    def test_empty_records_keep_the_schema(self, provider):
        frame = provider.from_records([], provider.get_matrix_schema)
        assert list(frame.columns) == ["j", "k", "value_re", "value_im"]
        assert len(frame) == 0

    def test_missing_column(self, provider):
        with pytest.raises(KeyError):
            provider.from_records([{"n": 1}], provider.get_convergence_schema)

    def test_decimal_strings_survive_csv(self, provider, tmp_path):
        digits = "0.12345678901234567890123456789012345678"
        frame = provider.from_records([{"n": 1, "error": digits, "ratio": ""}], provider.get_convergence_schema)
        path = provider.write_csv(frame, str(tmp_path / "report.csv"))
        assert digits in open(path, encoding="utf-8").read()

    def test_parameter_grid(self, provider):
        frame = provider.load_json_as_dataframe("acceptance_grid.json", provider.get_grid_schema)
        assert len(frame) == 12
        assert sorted(set(frame["theta"].to_list())) == pytest.approx([0.5, 1.0, 2 ** 0.5, 2.0])

    def test_unreadable_grid(self, provider, tmp_path):
        path = tmp_path / "grid.json"
        path.write_text("[{\"theta\": 1.0}]", encoding="utf-8")
        with pytest.raises(ConfigError):
            provider.load_json_as_dataframe(str(path), provider.get_grid_schema)


class TestRunConfigFiles:

    @pytest.mark.parametrize("name", ["marchenko_pastur.json", "linear_theta2.json", "quartic_theta_half.json"])
    def test_shipped_configs(self, name):
        config = load_run_config(name)
        assert {"theta", "alpha", "potential"} <= set(config)

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_run_config("no_such_config.json")

    @pytest.mark.parametrize("content", ["[1, 2]", "{not json"])
    def test_not_an_object(self, tmp_path, content):
        path = tmp_path / "config.json"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(ConfigError):
            load_run_config(str(path))


class TestFrameSummary:

    @pytest.fixture(params=[pd.DataFrame, pl.DataFrame], ids=["pandas", "polars"])
    def frame(self, request):
        return request.param(RECORDS)

    def test_summary_keeps_the_native_type(self, frame):
        summary = summarize_column(frame, "error")
        assert type(summary) is type(frame)
        row = nw.from_native(summary, eager_only=True).rows(named=True)[0]
        assert row["a_min"] == pytest.approx(0.0125)
        assert row["a_max"] == pytest.approx(0.1)

    def test_tail(self, frame):
        assert len(tail_rows(frame)) == 2
        assert len(tail_rows(frame, fraction=0.1)) == 2

    def test_log_log_rate(self, frame):
        assert fit_log_log_rate(frame) == pytest.approx(-1)

    def test_log_log_rate_needs_positive_errors(self):
        with pytest.raises(FitFailure):
            fit_log_log_rate(pl.DataFrame({"n": [8, 16], "error": ["0.1", "0"]}))

    def test_monotone_decay(self, frame):
        assert is_strictly_decreasing(frame)
        bumpy = pl.DataFrame({"n": [8, 16, 32], "error": ["0.1", "0.2", "0.05"]})
        assert not is_strictly_decreasing(bumpy)
        assert is_strictly_decreasing(bumpy, burn_in=1)
