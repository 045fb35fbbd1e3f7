import csv
import json
import math
import os

import pytest

from disc_osc import cli
from disc_osc.report import BOUNDS_COLUMNS, SCHEMA_VERSION, ZEROS_COLUMNS, fmt
from disc_osc.scenarios import (
    SCENARIOS,
    ConfigError,
    ScenarioConfig,
    grid_from_mapping,
    parse_complex,
    parse_complex_list,
    parse_int,
    parse_optional_complex,
    run_scenario,
)

CUSTOM = """\
[scenario]
name = custom_coefficient
checks = separation, balance, wronskian, normality
output_dir = out

[parameters]
# A = 25, f = sin(5z) / 5
coefficients = 25
radius = 0.9

[grid]
k_max = 8
"""


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_parsers():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex(" -0.5 ") == -0.5
    assert parse_complex_list("0.5, -0.5i") == [0.5, -0.5j]
    assert parse_complex_list("") == []
    assert parse_optional_complex("auto") is None
    assert parse_int("15") == 15
    with pytest.raises(ConfigError):
        parse_int("1.5")
    with pytest.raises(ConfigError):
        parse_complex("one")


def test_config_validation():
    with pytest.raises(ConfigError):
        ScenarioConfig("nope")
    with pytest.raises(ConfigError):
        ScenarioConfig("gamma_example", {"delta": "1"})
    with pytest.raises(ConfigError):
        ScenarioConfig("gamma_example", checks=["interpolation"])
    with pytest.raises(ConfigError):
        ScenarioConfig("gamma_example", checks=["made_up"])
    with pytest.raises(ConfigError):
        grid_from_mapping({"k_maxx": "3"})
    cfg = ScenarioConfig("gamma_example", {"gamma": "2"})
    assert cfg.parameters["gamma"] == 2.0 and cfg.checks == list(SCENARIOS["gamma_example"].checks)


def test_list_json(capsys):
    assert cli.main(["list", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 7
    assert {r["name"] for r in rows} == set(SCENARIOS)


def test_list_text(capsys):
    assert cli.main(["list", "--checks"]) == 0
    out = capsys.readouterr().out
    assert "gamma_example" in out and "removability" in out


def test_run_writes_reports(tmp_path, capsys):
    cfg = write(tmp_path, CUSTOM)
    assert cli.main(["run", str(cfg)]) == 0
    out = tmp_path / "out"
    assert sorted(p.name for p in out.iterdir()) == ["bounds.csv", "plot.svg", "report.json", "zeros.csv"]
    report = json.loads((out / "report.json").read_text())
    assert report["schema_version"] == SCHEMA_VERSION
    assert report["summary"]["passed"] and report["summary"]["zeros"] == 3
    assert report["grid"]["k_max"] == 8
    raw = (out / "zeros.csv").read_bytes()
    assert raw.count(b"\r\n") == 4 and b"\n" not in raw.replace(b"\r\n", b"")
    with open(out / "zeros.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == ZEROS_COLUMNS
    zs = sorted(float(r[1]) for r in rows[1:])
    assert zs == pytest.approx([-math.pi / 5, 0.0, math.pi / 5], abs=1e-12)
    with open(out / "bounds.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == BOUNDS_COLUMNS
    # 3 zeros x 2 critical points and 3 zero pairs
    assert len(rows) == 1 + 6 + 3
    assert all(float(r[-1]) >= -1e-12 for r in rows[1:])
    svg = (out / "plot.svg").read_text()
    assert svg.count('fill="#b5402a"') == 3 and svg.count("stroke-dasharray") == 2


def test_run_is_byte_identical(tmp_path):
    cfg = write(tmp_path, CUSTOM)
    assert cli.main(["run", str(cfg), "--output-dir", str(tmp_path / "a")]) == 0
    assert cli.main(["run", str(cfg), "--output-dir", str(tmp_path / "b"), "--no-plot"]) == 0
    for name in ("report.json", "zeros.csv", "bounds.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert not (tmp_path / "b" / "plot.svg").exists()


@pytest.mark.parametrize("text", [
    "[scenario]\nname = nope\n",
    "[scenario]\nname = gamma_example\n[extra]\nx = 1\n",
    "[scenario]\nname = gamma_example\n[parameters]\nbogus = 1\n",
    "[scenario]\nname = gamma_example\n[parameters]\ngamma = abc\n",
    "[scenario]\nname = gamma_example\n[parameters]\ngamma = -1\n",
    "[scenario]\nname = gamma_example\nchecks = interpolation\n",
    "[scenario]\nname = gamma_example\n[grid]\nk_max = x\n",
    "[scenario]\nname = gamma_example\nplot = maybe\n",
    "[scenario]\nchecks = balance\n",
    "[parameters]\ngamma = 1\n",
    "not an ini file",
])
def test_config_errors_exit_2(tmp_path, text, capsys):
    cfg = write(tmp_path, text)
    assert cli.main(["run", str(cfg)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path):
    assert cli.main(["run", str(tmp_path / "absent.ini")]) == 2


def test_failed_check_exits_1(capsys):
    # the q-example Wronskian drifts by about 1e-8 near the circle (rounding-limited)
    assert cli.main(["verify", "q_example", "--check", "wronskian"]) == 1
    assert "wronskian" in capsys.readouterr().err


def test_verify_json(capsys):
    assert cli.main(["verify", "custom_coefficient", "--param", "coefficients=25", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["scenario"] == "custom_coefficient"
    assert [r["name"] for r in report["reports"]] == ["separation", "balance", "wronskian"]


def test_verify_bad_param_exits_2():
    assert cli.main(["verify", "custom_coefficient", "--param", "coefficients"]) == 2
    assert cli.main(["verify", "nonnormal_witness", "--param", "xi=0.5"]) == 2


def test_thread_variable(monkeypatch):
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv(cli.THREAD_ENV, "2")
    cli._apply_threads()
    assert os.environ["OMP_NUM_THREADS"] == "2" and os.environ["OPENBLAS_NUM_THREADS"] == "2"
    monkeypatch.setenv(cli.THREAD_ENV, "zero")
    with pytest.raises(SystemExit):
        cli._apply_threads()


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 1e-300, -2.5e17):
        assert float(fmt(x)) == x
    assert fmt(float("nan")) == "nan"


def test_run_scenario_result_rows():
    res = run_scenario(ScenarioConfig("custom_coefficient", {"coefficients": "25"}))
    rows = res.zero_rows()
    assert [r[0] for r in rows] == [1, 2, 3]
    assert rows[0][1] == 0 and all(r[2] == 1 for r in rows)
    # (1 - |z|^2)|f'| = (1 - |z|^2) at the zeros of sin(5z)/5
    assert rows[1][3] == pytest.approx(1 - (math.pi / 5) ** 2)
