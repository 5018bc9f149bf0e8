import json

import pytest
from pydantic import ValidationError

from core.exact_ring import Mat2, Qr2
from core.walk_paths import PHI_STAR
from shared.config import DEFAULTS, ConfigError, RunConfig, load_config, load_settings, merge_configs
from shared.serialize import (
    document,
    emit,
    exact,
    matrix_fields,
    parse_exact,
    parse_matrix_fields,
    render,
    to_csv,
)
from shared.types import CheckReport, MeasureKind, Mismatch, OutputFormat, Subcommand


class TestConfigLoading:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "nope.yaml")

    def test_empty_file_is_empty_dict(self, config_file):
        assert load_config(config_file("")) == {}

    def test_merge_is_deep(self):
        merged = merge_configs({"a": {"x": 1, "y": 2}, "b": 1}, {"a": {"y": 3}})
        assert merged == {"a": {"x": 1, "y": 3}, "b": 1}

    def test_settings_overlay_defaults(self, config_file):
        settings = load_settings(config_file("series:\n  default_order: 8\n"))
        assert settings["series"] == {"default_order": 8, "max_order": 40}
        assert settings["walk"] == DEFAULTS["walk"]

    def test_explicit_path_must_exist(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_settings(tmp_path / "missing.yaml")

    @pytest.mark.parametrize(
        "text",
        [
            "series: [1, 2\n",
            "- just\n- a list\n",
            "walk: 5\n",
            "logging:\n  level: LOUD\n",
            "series:\n  max_order: many\n",
            "output:\n  format: xml\n",
        ],
    )
    def test_invalid_files_raise_config_error(self, config_file, text):
        with pytest.raises(ConfigError):
            load_settings(config_file(text))

    def test_log_level_is_case_insensitive(self, config_file):
        assert load_settings(config_file("logging:\n  level: debug\n"))["logging"]["level"] == "DEBUG"


class TestRunConfig:
    def settings(self, **sections):
        return merge_configs(DEFAULTS, sections)

    def test_defaults(self):
        config = RunConfig.from_settings(Subcommand.EXPAND, self.settings())
        assert config.order == 12
        assert config.theorem == 1
        assert config.format is OutputFormat.JSON
        assert config.state == PHI_STAR

    def test_cli_values_win(self):
        config = RunConfig.from_settings(Subcommand.EXPAND, self.settings(), order=6, theorem=2, format=None)
        assert (config.order, config.theorem) == (6, 2)

    def test_verify_uses_its_own_order(self):
        config = RunConfig.from_settings(Subcommand.VERIFY, self.settings(verify={"order": 10}))
        assert config.order == 10

    def test_order_bounded_by_max(self):
        with pytest.raises(ValidationError):
            RunConfig.from_settings(Subcommand.EXPAND, self.settings(), order=41)
        with pytest.raises(ValidationError):
            RunConfig.from_settings(Subcommand.EXPAND, self.settings(), order=1)

    def test_depths_bounded_by_max_n(self):
        settings = self.settings(walk={"max_n": 30})
        assert RunConfig.from_settings(Subcommand.DP, settings, n_max=30).n_max == 30
        with pytest.raises(ValidationError):
            RunConfig.from_settings(Subcommand.DP, settings, n_max=31)
        with pytest.raises(ValidationError):
            RunConfig.from_settings(Subcommand.FIRST_RETURN, settings, n_max=31)
        with pytest.raises(ValidationError):
            RunConfig.from_settings(Subcommand.MEASURE, settings, n=32)

    @pytest.mark.parametrize("n", [None, 3, -2])
    def test_measure_needs_even_n(self, n):
        with pytest.raises(ValidationError):
            RunConfig.from_settings(Subcommand.MEASURE, self.settings(), n=n)

    def test_classical_uniform_needs_positive_n(self):
        with pytest.raises(ValidationError):
            RunConfig(subcommand=Subcommand.MEASURE, kind=MeasureKind.CLASSICAL_UNIFORM, n=0)

    def test_state_string_is_parsed(self):
        config = RunConfig(subcommand=Subcommand.MEASURE, n=4, state="3/5,0,0,4/5")
        assert config.state.alpha.re == Qr2("3/5")

    def test_bad_state_string(self):
        with pytest.raises(ValidationError):
            RunConfig(subcommand=Subcommand.MEASURE, n=4, state="1,2")

    def test_verify_range_straddles_origin(self):
        with pytest.raises(ValidationError):
            RunConfig(subcommand=Subcommand.VERIFY, x_min=0, x_max=5)

    def test_unknown_theorem(self):
        with pytest.raises(ValidationError):
            RunConfig(subcommand=Subcommand.EXPAND, theorem=3)

    def test_first_return_needs_positive_depth(self):
        with pytest.raises(ValidationError):
            RunConfig(subcommand=Subcommand.FIRST_RETURN, n_max=0)


class TestSerialize:
    def test_exact_round_trip(self):
        for value in (Qr2("5/12"), Qr2("-1/4", "3/8"), Qr2(0, -1)):
            assert parse_exact(exact(value)) == value

    def test_matrix_fields_round_trip(self):
        m = Mat2.from_rows([["1/2", "-1/2*sqrt(2)"], [0, "7/3"]])
        fields = matrix_fields(m)
        assert list(fields) == ["m11", "m12", "m21", "m22"]
        assert parse_matrix_fields(fields) == m

    def test_csv(self):
        text = to_csv([{"k": 0, "weight": "5/8"}, {"k": 2, "weight": "1/4"}])
        assert text == "k,weight\n0,5/8\n2,1/4\n"
        assert to_csv([]) == ""

    def test_json_document(self):
        doc = document("measure", {"kind": MeasureKind.B, "n": 4}, [{"k": 2}])
        parsed = json.loads(render(doc, OutputFormat.JSON))
        assert parsed == {"meta": {"subcommand": "measure", "params": {"kind": "B", "n": 4}}, "rows": [{"k": 2}]}

    def test_emit_to_file(self, tmp_path):
        out = tmp_path / "nested" / "rows.csv"
        emit(document("dp", {}, [{"n": 0}]), OutputFormat.CSV, out, stream=None)
        assert out.read_text() == "n\n0\n"


class TestReports:
    def test_record_keeps_only_failures(self):
        report = CheckReport(name="demo")
        report.record(True, Mismatch("x", 1, 0, 1, 1))
        report.record(False, Mismatch("x", 2, 0, 1, 2))
        assert report.checked == 2
        assert not report.passed
        assert report.first_mismatch.n == 2

    def test_failure_without_mismatch_is_kept(self):
        report = CheckReport(name="demo")
        report.record(False)
        assert report.checked == 1
        assert not report.passed
        assert report.first_mismatch.relation == "demo"

    def test_describe(self):
        text = Mismatch("Gamma closed form vs DP", 4, 2, "a", "b", "entry (1,1)").describe()
        assert text == "Gamma closed form vs DP at n=4, k=2: expected a, got b (entry (1,1))"
