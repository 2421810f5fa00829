"""
Command-line front end: exit codes, deterministic reports, written files.
"""
import importlib

import pytest

from src.cli import build_parser, render_csv, run
from src.graphs import catalog
from src.ground_states.surgery import CriticalLengthResult, Probe
from src.ground_states.minimize import Status

LEVELS_AT_UNIT_MASS = (
    "mass: 1\n"
    "power: 4\n"
    "LINE: -0.0104166666667\n"
    "HALFLINE: -0.0416666666667\n"
    "STAR3_STATIONARY: -0.00462962962963\n"
)

MINIMIZE_ARGS = ["minimize", "halfline", "--mass", "1", "--h-max", "0.2", "--truncation", "20",
                 "--starts", "vertex:v"]


def test_levels_golden_output(capsys):
    assert run(["levels", "--mass", "1"]) == 0
    assert capsys.readouterr().out == LEVELS_AT_UNIT_MASS


def test_levels_as_csv(capsys):
    assert run(["levels", "--mass", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "kind,value,derived"
    assert lines[1] == "LINE,-0.0833333333333,False"


def test_check_star3(capsys):
    assert run(["check", "star3"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "assumption_h: true, bubble_tower: false"
    assert "graph: star3" in out


def test_check_gl_family(capsys):
    assert run(["check", "gl", "--pendant", "2.5"]) == 0
    out = capsys.readouterr().out
    assert "graph: gl_2.5" in out
    assert out.splitlines()[-1] == "assumption_h: false, bubble_tower: false"


@pytest.mark.parametrize("name", sorted(catalog.BUNDLED))
def test_every_bundled_graph_checks(name, capsys):
    assert run(["check", name]) == 0
    assert f"graph: {name}" in capsys.readouterr().out


def test_missing_graph_file(capsys, tmp_path):
    code = run(["check", str(tmp_path / "absent.graph")])
    assert code == 3
    assert capsys.readouterr().err.splitlines()[-1].startswith("error: ")


def test_malformed_graph_file(capsys, tmp_path):
    path = tmp_path / "broken.graph"
    path.write_text("vertex a\nedge a b 1.0\n")
    assert run(["check", str(path)]) == 3


def test_non_positive_mass(capsys):
    assert run(["levels", "--mass", "0"]) == 3


@pytest.mark.parametrize("argv", [["levels"], ["frobnicate"], ["levels", "--mass", "1", "--format", "xml"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        run(argv)
    assert info.value.code == 2


def test_invalid_configuration(monkeypatch, capsys):
    monkeypatch.setenv("DEFAULT_POWER", "7")
    assert run(["levels", "--mass", "1"]) == 2
    assert "DEFAULT_POWER" in capsys.readouterr().err


def test_minimize_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert run(MINIMIZE_ARGS + ["--output-dir", str(first)]) == 0
    out_first = capsys.readouterr().out
    assert run(MINIMIZE_ARGS + ["--output-dir", str(second)]) == 0
    out_second = capsys.readouterr().out
    assert out_first == out_second
    for name in ("halfline_profile.csv", "halfline_report.txt"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    assert (first / "halfline_profile.csv").read_text().splitlines()[0] == "edge_id,arclength,value"


def test_minimize_writes_to_the_configured_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NLSGRAPH_OUTPUT_DIR", str(tmp_path / "configured"))
    assert run(MINIMIZE_ARGS) == 0
    assert (tmp_path / "configured" / "halfline_report.txt").is_file()


def test_classify_tower_exit_code(tmp_path, capsys):
    code = run(["classify", "tower2", "--mass", "1", "--h-max", "0.2", "--truncation", "40",
                "--output-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "verdict.status: EXISTS" in out
    assert "verdict.structural: true" in out
    assert (tmp_path / "tower2_verdict.txt").read_text() == out
    assert (tmp_path / "tower2_state.csv").is_file()


def test_pendant_competitor_csv(tmp_path, capsys):
    code = run(["competitor", "--construction", "pendant", "--mass", "1", "--pendant", "2",
                "--h-max", "0.2", "--truncation", "40", "--format", "csv", "--output-dir", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "edge_id,arclength,value"
    assert (tmp_path / "pendant_2_competitor.csv").is_file()
    assert "summary.exact_margin: -" in (tmp_path / "pendant_2_competitor.txt").read_text()


def test_critical_length_writes_the_probe_table(monkeypatch, tmp_path, capsys):
    tool = importlib.import_module("src.tools.graph_critical_length")
    result = CriticalLengthResult(1.0, 1.25, 1.5, [Probe(0.001, -0.0104, Status.LIKELY_NONEXISTENT),
                                                  Probe(50.0, -0.03, Status.EXISTS)])
    monkeypatch.setattr(tool, "critical_length", lambda *args: result)
    code = run(["critical-length", "--mass", "1", "--pendant", "2", "--output-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "result.ell_star: 1.375" in out
    assert "critical_mass.mass_low: 0.625" in out
    probes = (tmp_path / "critical_length_1.csv").read_text().splitlines()
    assert probes == ["ell,best_energy,verdict", "0.001,-0.0104,LIKELY_NONEXISTENT", "50,-0.03,EXISTS"]


def test_render_csv_without_a_table():
    result = {"success": True, "graph": "line", "vertices": 1, "assumption_h": True}
    assert render_csv("check", result).splitlines() == ["graph,vertices,assumption_h", "line,1,True"]


def test_parser_lists_every_command():
    usage = build_parser().format_help()
    for command in ("check", "levels", "minimize", "classify", "competitor", "critical-length", "limit-table"):
        assert command in usage
