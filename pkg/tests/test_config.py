"""
Settings, the MCP configuration adapter and the export helpers.
"""
import pytest

from src.config.mcp_config import MCPConfigAdapter, get_config
from src.config.settings import Settings, settings
from src.utils.export_utils import export_to_csv, format_number, format_report, write_export


class TestSettings:

    def test_defaults(self):
        assert settings.DEFAULT_POWER == 4.0
        assert settings.MESH_RESOLUTION == 0.1
        assert settings.TRUNCATION_SCALE == 80.0
        assert settings.validate_config()["valid"]

    @pytest.mark.parametrize("key,value", [
        ("DEFAULT_POWER", "6"),
        ("MESH_RESOLUTION", "0"),
        ("MAX_ITERS", "0"),
        ("RUNAWAY_THRESHOLD", "1.5"),
        ("LOG_LEVEL", "chatty"),
    ])
    def test_invalid_values(self, monkeypatch, key, value):
        monkeypatch.setenv(key, value)
        Settings.refresh()
        status = settings.validate_config()
        assert not status["valid"]
        assert any(key in error for error in status["errors"])

    def test_coarse_settings_warn(self, monkeypatch):
        monkeypatch.setenv("TRUNCATION_SCALE", "10")
        Settings.refresh()
        status = settings.validate_config()
        assert status["valid"]
        assert any("TRUNCATION_SCALE" in w for w in status["warnings"])

    def test_output_path_creates_the_directory(self, tmp_path):
        path = Settings.output_path("report.txt", str(tmp_path / "nested"))
        assert path.parent.is_dir()
        assert path.name == "report.txt"


class TestMCPConfigAdapter:

    def test_mcp_values_win_over_the_environment(self, monkeypatch):
        monkeypatch.setenv("TOL_GRAD", "1e-5")
        MCPConfigAdapter.initialize_from_mcp({"TOL_GRAD": 1e-8})
        assert get_config("TOL_GRAD") == "1e-08"
        assert MCPConfigAdapter.get_config_source() == "MCP Configuration"
        Settings.refresh()
        assert settings.TOL_GRAD == 1e-8

    def test_fallback_to_default(self):
        assert get_config("NLSGRAPH_UNSET_KEY", "fallback") == "fallback"
        assert not MCPConfigAdapter.is_mcp_initialized()


class TestExport:

    @pytest.mark.parametrize("value,text", [
        (1.0, "1"),
        (-1.0 / 96.0, "-0.0104166666667"),
        (-0.0, "0"),
        (float("inf"), "inf"),
        (True, "true"),
        (None, ""),
        (3, "3"),
    ])
    def test_format_number(self, value, text):
        assert format_number(value) == text

    def test_nested_report(self):
        report = {"graph": "line", "energy": {"total": 0.5, "mass": 1.0}, "starts": [1, 2],
                  "records": [{"name": "a"}]}
        assert format_report(report) == (
            "graph: line\nenergy.total: 0.5\nenergy.mass: 1\nstarts: 1, 2\nrecords.0.name: a\n"
        )

    def test_csv_columns_and_precision(self):
        result = export_to_csv([{"b": 1.0 / 3.0, "a": 2}], "thirds", ("a", "b"))
        assert result["success"]
        assert result["data"] == "a,b\n2,0.333333333333\n"
        assert result["filename"] == "thirds.csv"

    def test_write_export(self, tmp_path):
        path = write_export(export_to_csv([{"x": 1}], "one"), tmp_path)
        assert path.read_text() == "x\n1\n"

    def test_write_failed_export(self, tmp_path):
        with pytest.raises(ValueError):
            write_export({"success": False, "error": "boom"}, tmp_path)


class TestPrefixedKeys:

    def test_prefixed_key_wins(self, monkeypatch):
        monkeypatch.setenv("MAX_ITERS", "10")
        monkeypatch.setenv("NLSGRAPH_MAX_ITERS", "20")
        Settings.refresh()
        assert settings.MAX_ITERS == 20

    def test_integer_keys_reject_fractions(self, monkeypatch):
        monkeypatch.setenv("MAX_ITERS", "2.5")
        with pytest.raises(ValueError):
            Settings.refresh()
        monkeypatch.delenv("MAX_ITERS")
