"""
Test suite for the command line front end.

Covers scenario file parsing, report emission and the subcommands with
their exit codes.
"""

import csv
import io
import json
import math
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from config.constants import ExitCodes, PathConfig, ReportConfig, ScenarioDefaults
from config.settings import Settings
from main import cmd_absorb, cmd_invert, cmd_range, cmd_simulate, load_scenario, main
from models.errors import ConfigParseError
from models.simulation import RmseReport, RmseRow, ScenarioConfig
from services.config_loader import _locate, known_keys, parse_config, parse_config_text
from services.report_writer import render_json

SMALL_SCENARIO = """\
# quick sweep
node_count = 5
trials = 2
snr_grid_db = 0, 10, 20, 30, 40
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.conf"
    path.write_text(SMALL_SCENARIO, encoding="utf-8")
    return path


# ============================================================================
# Scenario files
# ============================================================================

def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.conf"
    path.write_text("", encoding="utf-8")
    assert parse_config(path) == ScenarioConfig()


def test_comments_and_blank_lines_are_ignored():
    config = parse_config_text("\n# nothing here\n   \nnode_count = 100  # reference value\n")
    assert config.node_count == 100


def test_nested_and_list_keys():
    config = parse_config_text(
        "track.spacing_m = 5\n"
        "channel.frequency_khz = 10\n"
        "volume_m = 200, 100, 50\n"
        "snr_grid_db = 0, 20, inf\n"
    )
    assert config.track.spacing_m == 5.0
    assert config.channel.frequency_khz == 10.0
    assert config.volume_m == (200.0, 100.0, 50.0)
    assert config.snr_grid_db == (0.0, 20.0, math.inf)


def test_known_keys_cover_nested_models():
    keys = known_keys()
    assert "node_count" in keys
    assert "track.spacing_m" in keys
    assert "ranging.tolerance" in keys
    assert "track" not in keys


@pytest.mark.parametrize(
    "text,key,line",
    [
        ("node_count = -5\n", "node_count", 1),
        ("trials = 3\nnode_count = many\n", "node_count", 2),
        ("# header\n\nnode_cuont = 10\n", "node_cuont", 3),
        ("track.spacing_m = 0\n", "track.spacing_m", 1),
        ("trials = 1\ntrials = 2\n", "trials", 2),
        ("snr_grid_db = 10, 0\n", "snr_grid_db", 1),
        ("trials = 2\ntrack.x_start_m = 700\n", "track.x_start_m", 2),
        ("trials = 2\ntrack.x_start_m = 0\n", "track.x_start_m", 2),
        ("track.spacing_m = 5\nvolume_m = 700, 500, 500\n", "volume_m", 2),
        ("channel.detection_threshold_db = 80\nchannel.source_level_db = 70\n", "channel.source_level_db", 2),
    ],
)
def test_parse_errors_name_key_and_line(text, key, line):
    with pytest.raises(ConfigParseError) as exc_info:
        parse_config_text(text)
    assert exc_info.value.key == key
    assert exc_info.value.line == line
    assert f"line {line}" in str(exc_info.value)
    assert key in str(exc_info.value)


def test_cross_field_error_names_related_keys_when_none_set():
    key, line = _locate((), {"trials": 1})
    assert line is None
    assert key.split(", ") == ["volume_m", "track.x_start_m", "track.x_end_m", "track.spacing_m"]


def test_line_without_equals_is_rejected():
    with pytest.raises(ConfigParseError) as exc_info:
        parse_config_text("node_count 100\n")
    assert exc_info.value.line == 1


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigParseError):
        parse_config(tmp_path / "absent.conf")


def test_sample_scenario_parses():
    config = parse_config(project_root / PathConfig.SAMPLE_SCENARIO)
    assert config.node_count == 100
    assert config.volume_m == (500.0, 500.0, 500.0)


@pytest.mark.parametrize(
    "seed,expected",
    [
        (None, 99),
        (7, 7),
    ],
)
def test_seed_precedence(tmp_path, seed, expected):
    path = tmp_path / "seeded.conf"
    path.write_text("master_seed = 99\n", encoding="utf-8")
    assert load_scenario(str(path), seed).master_seed == expected


def test_seed_default_without_file():
    assert load_scenario(None).master_seed == ScenarioDefaults.MASTER_SEED


def test_negative_seed_is_rejected():
    with pytest.raises(ConfigParseError):
        load_scenario(None, -1)


# ============================================================================
# simulate
# ============================================================================

def test_simulate_writes_csv(scenario_file, tmp_path):
    out = tmp_path / "report.csv"
    assert cmd_simulate(str(scenario_file), str(out), "csv", workers=1) == ExitCodes.SUCCESS
    rows = list(csv.reader(io.StringIO(out.read_text(encoding="utf-8"))))
    assert rows[0] == ReportConfig.CSV_COLUMNS
    assert len(rows) == 6
    assert [float(row[0]) for row in rows[1:]] == [0.0, 10.0, 20.0, 30.0, 40.0]


def test_simulate_is_byte_identical(scenario_file, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cmd_simulate(str(scenario_file), str(first), workers=1) == ExitCodes.SUCCESS
    assert cmd_simulate(str(scenario_file), str(second), workers=3) == ExitCodes.SUCCESS
    assert first.read_bytes() == second.read_bytes()


def test_simulate_writes_json_with_echo(scenario_file, tmp_path):
    out = tmp_path / "report.json"
    assert cmd_simulate(str(scenario_file), str(out), "json", seed=11, workers=1) == ExitCodes.SUCCESS
    document = json.loads(out.read_text(encoding="utf-8"))
    assert len(document["rows"]) == 5
    assert document["config_echo"]["master_seed"] == 11
    assert ScenarioConfig.model_validate(document["config_echo"]) == load_scenario(str(scenario_file), 11)


def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name}")


def test_simulate_json_is_strict_with_infinite_snr(tmp_path):
    path = tmp_path / "noiseless.conf"
    path.write_text("node_count = 3\ntrials = 1\nsnr_grid_db = 20, inf\n", encoding="utf-8")
    out = tmp_path / "report.json"
    assert cmd_simulate(str(path), str(out), "json", workers=1) == ExitCodes.SUCCESS
    document = json.loads(out.read_text(encoding="utf-8"), parse_constant=_reject_constant)
    assert document["rows"][-1]["snr_db"] == "inf"
    assert document["config_echo"]["snr_grid_db"] == [20.0, "inf"]
    assert ScenarioConfig.model_validate(document["config_echo"]) == load_scenario(str(path))


def test_json_report_writes_nan_as_null():
    config = ScenarioConfig(node_count=1, trials=1, snr_grid_db=(0.0,))
    row = RmseRow(
        snr_db=0.0, rmse_m=math.nan, localized_fraction=0.0, degenerate_fraction=math.nan,
        mean_abs_x_error_m=math.nan, nodes_deployed=1, nodes_localized=0
    )
    report = RmseReport(rows=[row], config_echo=config)
    document = json.loads(render_json(report), parse_constant=_reject_constant)
    assert document["rows"][0]["rmse_m"] is None


def test_simulate_rejects_zero_workers(scenario_file, tmp_path, capsys):
    out = tmp_path / "report.csv"
    assert cmd_simulate(str(scenario_file), str(out), workers=0) == ExitCodes.USAGE
    assert "--workers" in capsys.readouterr().err
    assert not out.exists()


def test_simulate_unwritable_path(scenario_file, tmp_path, capsys):
    out = tmp_path / "missing" / "report.csv"
    assert cmd_simulate(str(scenario_file), str(out), workers=1) == ExitCodes.RUNTIME
    assert "cannot write" in capsys.readouterr().err


def test_simulate_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.conf"
    path.write_text("node_count = -5\n", encoding="utf-8")
    assert cmd_simulate(str(path), str(tmp_path / "r.csv")) == ExitCodes.USAGE
    assert "node_count" in capsys.readouterr().err


# ============================================================================
# Runtime settings
# ============================================================================

@pytest.mark.parametrize("field,value", [("log_level", "LOUD"), ("max_workers", 0)])
def test_settings_reject_bad_values(field, value):
    with pytest.raises(ValueError):
        Settings(**{field: value})


# ============================================================================
# invert, absorb, range
# ============================================================================

@pytest.mark.parametrize(
    "tl,alpha,expected",
    [
        (20.0, 0.0, 10.0),
        (61.18703, 1.18703, 1000.0),
    ],
)
def test_invert_prints_range(capsys, tl, alpha, expected):
    assert cmd_invert(tl, alpha, 2.0) == ExitCodes.SUCCESS
    assert float(capsys.readouterr().out) == pytest.approx(expected, rel=1e-9)


def test_invert_negative_absorption(capsys):
    assert cmd_invert(20.0, -1.0, 2.0) == ExitCodes.USAGE
    assert capsys.readouterr().err.startswith("error:")


@pytest.mark.parametrize("frequency,expected", [(10.0, 1.18703), (1.0, 0.069004)])
def test_absorb_prints_alpha(capsys, frequency, expected):
    assert cmd_absorb(frequency) == ExitCodes.SUCCESS
    assert float(capsys.readouterr().out) == pytest.approx(expected, rel=5e-6)


def test_absorb_zero_frequency():
    assert cmd_absorb(0.0) == ExitCodes.USAGE


def test_range_prints_detection_range(capsys):
    assert cmd_range(None) == ExitCodes.SUCCESS
    assert float(capsys.readouterr().out) > 500.0


def test_main_dispatches(capsys):
    assert main(["absorb", "--freq-khz", "10"]) == ExitCodes.SUCCESS
    assert float(capsys.readouterr().out) == pytest.approx(1.18703, rel=5e-6)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["simulate"],
        ["invert", "--tl", "x", "--alpha", "1"],
        ["bogus"],
        ["simulate", "--out", "r.csv", "--workers", "0"],
        ["simulate", "--out", "r.csv", "--workers", "two"],
    ],
)
def test_usage_errors_exit_with_usage_code(argv):
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    assert exc_info.value.code == ExitCodes.USAGE


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
