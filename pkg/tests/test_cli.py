import json
import subprocess
import sys

import pytest

from adiabatic_search.errors import ConfigurationError
from adiabatic_search.lab import cli
from adiabatic_search._csv import read_rows


def parse(*argv):
    return cli.resolve(cli.build_parser().parse_args(list(argv)))


def test_defaults_mirror_the_documented_sweep():
    cfg = parse("sweep")
    assert cfg["paths"] == ("linear", "sin", "square", "sin2", "sin3", "cubic")
    assert (cfg["n"], cfg["m"], cfg["tmin"], cfg["tmax"], cfg["points"]) == (100, 1, 10.0, 1e4, 200)
    assert cfg["dt"] == 0.01 and cfg["smooth"] == 9 and cfg["no_renormalize"] is False


def test_config_file_and_override(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# comment\nn = 10\npoints=30  # inline\n--paths = linear, poly:0,1/2,1/2\nno-renormalize = yes\n")
    cfg = parse("sweep", "--config", str(conf), "--points", "40")
    assert cfg["n"] == 10
    assert cfg["points"] == 40
    assert cfg["paths"] == ("linear", "poly:0,1/2,1/2")
    assert cfg["no_renormalize"] is True


def test_config_rejects_unknown_keys(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = blue\n")
    with pytest.raises(ConfigurationError):
        cli.read_config(conf)
    conf.write_text("just words\n")
    with pytest.raises(ConfigurationError):
        cli.read_config(conf)


def test_bad_values_are_configuration_errors():
    with pytest.raises(ConfigurationError):
        parse("sweep", "--n", "ten")


def test_sweep_command(tmp_path, capsys):
    rc = cli.main(["sweep", "--paths", "linear,square", "--n", "10", "--tmin", "5", "--tmax", "20",
                   "--points", "5", "--smooth", "3", "--out", str(tmp_path)])
    assert rc == 0
    header, rows = read_rows(tmp_path / "sweep.csv")
    assert header == ["path", "T", "delta_raw", "delta_smoothed"] and len(rows) == 10
    meta = json.loads((tmp_path / "sweep.meta.json").read_text())
    assert meta["paths"] == ["linear", "square"] and meta["points"] == 5


def test_sweep_bad_window_exits_nonzero(tmp_path, capsys):
    assert cli.main(["sweep", "--smooth", "4", "--out", str(tmp_path)]) == 2
    assert "odd" in capsys.readouterr().err


def test_evolve_command(tmp_path, capsys):
    rc = cli.main(["evolve", "--path", "cubic", "--n", "10", "--m", "1", "--T", "20", "--record", "10",
                   "--out", str(tmp_path)])
    assert rc == 0
    header, rows = read_rows(tmp_path / "trajectory.csv")
    assert header[0] == "t" and float(rows[-1][0]) == 20.0
    assert (tmp_path / "residual.csv").exists()
    meta = json.loads((tmp_path / "trajectory.meta.json").read_text())
    assert meta["model"] == "reduced" and meta["record_stride"] == 10
    assert "delta =" in capsys.readouterr().out


def test_evolve_full_model_agrees(tmp_path):
    for sub, extra in (("red", []), ("full", ["--full"])):
        cli.main(["evolve", "--path", "linear", "--n", "10", "--T", "10", "--out", str(tmp_path / sub)] + extra)
    red = json.loads((tmp_path / "red" / "trajectory.meta.json").read_text())["delta"]
    full = json.loads((tmp_path / "full" / "trajectory.meta.json").read_text())
    assert full["model"] == "full"
    assert abs(full["delta"] - red) <= 1e-10


def test_evolve_half_marked_skips_residual(tmp_path):
    assert cli.main(["evolve", "--path", "linear", "--n", "4", "--m", "2", "--T", "5", "--out", str(tmp_path)]) == 0
    assert not (tmp_path / "residual.csv").exists()


def test_figure_command_exit_status(tmp_path, capsys):
    assert cli.main(["figure", "--id", "fig4", "--out", str(tmp_path)]) == 0
    assert "[PASS]" in capsys.readouterr().out
    assert cli.main(["figure", "--id", "fig10", "--out", str(tmp_path)]) == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "adiabatic_search", "evolve", "--path", "sin", "--n", "10", "--T", "3",
         "--out", str(tmp_path)],
        capture_output=True, text=True, check=True,
    )
    assert "trajectory.csv" in out.stdout


def test_check_exit_code_follows_results(monkeypatch, capsys):
    from adiabatic_search.lab import acceptance

    ok = acceptance.CriterionResult(1, "a", True, "")
    bad = acceptance.CriterionResult(2, "b", False, "")
    monkeypatch.setattr(acceptance, "run_all", lambda workers, echo=print: [ok, ok])
    assert cli.main(["check"]) == 0
    monkeypatch.setattr(acceptance, "run_all", lambda workers, echo=print: [ok, bad])
    assert cli.main(["check"]) == 1
    assert "1/2 criteria passed" in capsys.readouterr().out
