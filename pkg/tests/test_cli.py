import subprocess
import sys

import pytest

from mimsim.cli import EXIT_ACCURACY, EXIT_CONFIG, EXIT_OK, EXIT_ORACLE, main
from mimsim.config import OUTPUT_DIR_ENV, build_config, parse_grid, resolve_values
from mimsim.errors import ConfigError
from mimsim.table import read_csv


def write_ini(path, text):
    path.write_text(text)
    return str(path)


# -- configuration layers -------------------------------------------------------------


def test_precedence_default_file_flag(tmp_path):
    ini = write_ini(tmp_path / "c.ini", "[model]\nhop_j = 90\ndelta0 = 30\n")
    cfg = build_config("check-conditions")
    assert cfg.params.hop_j == 100.25 and cfg.params.delta0 == 40
    cfg = build_config("check-conditions", ini)
    assert cfg.params.hop_j == 90 and cfg.params.delta0 == 30
    cfg = build_config("check-conditions", ini, {"delta0": "25"})
    assert cfg.params.hop_j == 90 and cfg.params.delta0 == 25


def test_preset_sits_below_file(tmp_path):
    ini = write_ini(tmp_path / "c.ini", "[model]\npreset = experiment\nkappa_c = 0.3\n")
    cfg = build_config("estimate-phonon", ini)
    assert cfg.params.omega_m == 1000 and cfg.params.kappa_c == 0.3
    cfg = build_config("estimate-phonon", ini, {"preset": "fig2"})
    assert cfg.params.omega_m == 201


def test_unknown_key_is_error(tmp_path):
    with pytest.raises(ConfigError, match="delta_0"):
        build_config("protocol", write_ini(tmp_path / "a.ini", "[model]\ndelta_0 = 3\n"))
    with pytest.raises(ConfigError, match="section"):
        build_config("protocol", write_ini(tmp_path / "b.ini", "[physics]\ng0 = 1\n"))
    with pytest.raises(ConfigError):
        resolve_values("protocol", overrides={"speed": 3})


def test_absolute_units():
    cfg = build_config("check-conditions", None, {
        "units": "absolute", "g0": "1e3", "omega_m": "1e6", "hop_j": "499750", "delta0": "4e4"})
    p = cfg.params
    assert (p.g0, p.omega_m, p.hop_j, p.delta0) == (1.0, 1000.0, 499.75, 40.0)


def test_sweep_lists_only_where_allowed():
    cfg = build_config("fidelity-sweep", None, {"delta0": "10, 30"})
    assert cfg.delta0_values == (10.0, 30.0)
    with pytest.raises(ConfigError):
        build_config("protocol", None, {"delta0": "10,30"})
    with pytest.raises(ConfigError):
        build_config("fidelity-sweep", None, {"hop_j": "10,30"})


def test_parse_grid():
    assert parse_grid("0, lin:1:3:3") == [0.0, 1.0, 2.0, 3.0]
    g = parse_grid("geom:5:300:24")
    assert len(g) == 24 and g[0] == pytest.approx(5) and g[-1] == pytest.approx(300)
    for bad in ("", "x", "geom:0:1:3", "lin:1:2"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert build_config("protocol").output_path == tmp_path / "protocol.csv"
    assert build_config("protocol", None, {"out": "x.csv"}).output_path.name == "x.csv"


def test_bad_values_are_config_errors():
    for over in ({"g0": "abc"}, {"sign": "0"}, {"units": "furlongs"}, {"hop_j": "-1"},
                 {"measure_time": "later"}, {"workers": "0"}):
        with pytest.raises(ConfigError):
            build_config("protocol", None, over)


# -- command line ---------------------------------------------------------------------


def test_cli_estimate_phonon(tmp_path, capsys):
    out = tmp_path / "e.csv"
    assert main(["estimate-phonon", "--out", str(out)]) == EXIT_OK
    assert "0.961538" in capsys.readouterr().out
    assert read_csv(out).column("leaked_phonons") == ["%.17g" % (1 / 1.04)]


def test_cli_check_conditions(tmp_path, capsys):
    assert main(["check-conditions", "--out", str(tmp_path / "c.csv")]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "detuning_ratio" in printed and "pass" in printed


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = write_ini(tmp_path / "bad.ini", "[model]\nmass = 1\n")
    assert main(["protocol", "--config", bad, "--out", str(tmp_path / "p.csv")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_cli_accuracy_exit_code(tmp_path, capsys):
    code = main(["fidelity-sweep", "--delta0", "40", "--n-max", "4", "--t-end", "3",
                 "--out", str(tmp_path / "f.csv")])
    assert code == EXIT_ACCURACY
    err = capsys.readouterr().err
    assert "delta0=40" in err and "n_max" in err


def test_cli_oracle_pass_and_fail(tmp_path, capsys):
    assert main(["oracle-check", "--out", str(tmp_path / "o.csv")]) == EXIT_OK
    # ten times the default step for this instance
    dt = str(10 * 2 * 3.141592653589793 / (400 * 20.1))
    code = main(["oracle-check", "--dt", dt, "--norm-drift-budget", "1",
                 "--out", str(tmp_path / "o2.csv")])
    assert code == EXIT_ORACLE
    assert "FAIL" in capsys.readouterr().out


def test_cli_svg(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["displacement", "--t-end", "1", "--sample-spacing", "0.05", "--svg",
                 "--out", str(out)]) == EXIT_OK
    svg = out.with_suffix(".svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


@pytest.mark.parametrize("scenario,extra", [
    ("fidelity-sweep", ["--t-end", "1"]),
    ("displacement", ["--t-end", "1"]),
    ("f-vs-delta0", ["--hop-j", "50.25,100.25", "--delta0", "10,40"]),
    ("protocol", []),
    ("check-conditions", []),
    ("estimate-phonon", []),
    ("oracle-check", []),
])
def test_cli_determinism(tmp_path, scenario, extra):
    ini = write_ini(tmp_path / "run.ini", "[integration]\nsample_spacing = 0.05\n")
    files = []
    for i, workers in enumerate(("1", "1", "2")):
        out = tmp_path / f"{i}.csv"
        assert main([scenario, "--config", ini, "--workers", workers, "--out", str(out), *extra]) == 0
        files.append(out.read_bytes())
    assert files[0] == files[1] == files[2]


def test_help_lists_keys_and_exit_codes():
    res = subprocess.run([sys.executable, "-m", "mimsim.cli", "protocol", "--help"],
                         capture_output=True, text=True, check=True)
    for key in ("norm_drift_budget", "measure_time", OUTPUT_DIR_ENV, "exit codes"):
        assert key in res.stdout
