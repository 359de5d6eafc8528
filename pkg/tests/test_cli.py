import io
import json
import subprocess
import sys

import numpy as np
import pytest

from delaygame import __version__, shipped_scenario
from delaygame.cli import cli_main
from delaygame.scenario_io import read_surface_grid, read_trajectory_csv


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def scn(name):
    return str(shipped_scenario(name))


def test_no_arguments_prints_help():
    code, out, err = run()
    assert code == 1
    assert "usage: delaygame" in err and "simulate" in err


def test_version():
    code, out, _ = run("--version")
    assert code == 0 and out.strip() == f"delaygame {__version__}"


def test_subcommand_help():
    code, out, _ = run("sweep", "--help")
    assert code == 0 and "--workers" in out


def test_version_via_module():
    done = subprocess.run([sys.executable, "-m", "delaygame.cli", "--version"], capture_output=True, text=True)
    assert done.returncode == 0 and __version__ in done.stdout


def test_classify_json_condition1():
    code, out, _ = run("classify", "--scenario", scn("condition1"), "--json")
    assert code == 0
    corners = {c["name"]: c for c in json.loads(out)["classification"]["corners"]}
    assert corners["gamma4"]["verdict"] == "ESS"
    assert [n for n, c in corners.items() if c["verdict"] == "ESS"] == ["gamma4"]


def test_classify_table():
    code, out, _ = run("classify", "--scenario", scn("condition3"))
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("gamma8"))
    assert line.endswith("ESS") and "---" in line


def test_simulate_to_stdout_condition3():
    code, out, err = run("simulate", "--scenario", scn("condition3"))
    assert code == 0
    times, states = read_trajectory_csv(io.StringIO(out))
    assert times[-1] == 50
    assert np.abs(states[-1] - (1, 1, 1)).max() < 1e-3
    assert "limit (1, 1, 1)" in err


def test_simulate_to_directory(tmp_path):
    code, out, _ = run("simulate", "--scenario", scn("condition2"), "--out", str(tmp_path / "run"))
    assert code == 0
    report = json.loads((tmp_path / "run" / "report.json").read_text())
    assert report["limit_corner"] == [1, 0, 1]
    _, states = read_trajectory_csv(tmp_path / "run" / "trajectory.csv")
    assert states.shape[1] == 3


def test_compare(tmp_path):
    code, out, _ = run("compare", "--scenario", scn("condition2"), "--out", str(tmp_path))
    assert code == 0
    assert "same limit: True" in out
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "trajectory_tau0.01.csv", "trajectory_tau0.05.csv", "trajectory_tau0.07.csv"
    ]


def test_equilibria():
    code, out, _ = run("equilibria", "--scenario", scn("condition1"))
    assert code == 0
    assert out.count("gamma") == 8
    assert "interior point: nonexistent" in out


def test_sweep(tmp_path):
    text = shipped_scenario("condition4").read_text()
    text = text.replace("c_dj:1:30:30", "c_dj:5:25:3").replace("c_sj:1:30:30", "c_sj:5:25:3") + "t_end = 20\n"
    path = tmp_path / "small.scn"
    path.write_text(text)
    code, out, _ = run("sweep", "--scenario", str(path), "--out", str(tmp_path / "grid"))
    assert code == 0
    rows = read_surface_grid(tmp_path / "grid" / "surface.csv")
    assert rows.shape == (9, 6)
    assert (tmp_path / "grid" / "surface.json").exists()
    assert "9 of 9 cells converged" in out


def test_sweep_needs_axes(tmp_path):
    code, _, err = run("sweep", "--scenario", scn("condition1"), "--out", str(tmp_path))
    assert code == 1 and "sweep" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("simulate",),
        ("frobnicate", "--scenario", "x"),
        ("classify", "--scenario", "/no/such/file.scn"),
        ("compare", "--scenario", "__bad__"),
    ],
)
def test_validation_errors_exit_1(argv, tmp_path):
    argv = tuple(str(tmp_path / "bad.scn") if a == "__bad__" else a for a in argv)
    (tmp_path / "bad.scn").write_text("tau = -1\n")
    code, _, err = run(*argv)
    assert code == 1 and err


def test_bad_scenario_reports_line(tmp_path):
    path = tmp_path / "bad.scn"
    path.write_text("i_j = 30\ncolour = red\n")
    code, _, err = run("classify", "--scenario", str(path))
    assert code == 1 and "line 2: unknown key 'colour'" in err


def test_numeric_failure_exit_2(tmp_path):
    text = shipped_scenario("condition1").read_text().replace("tau = 0.01", "tau = 0.2")
    path = tmp_path / "unstable.scn"
    path.write_text(text)
    code, _, err = run("simulate", "--scenario", str(path))
    assert code == 2 and "numeric error" in err
