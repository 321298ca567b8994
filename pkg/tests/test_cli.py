"""CLI exit codes and byte-for-byte golden outputs.

Regenerate goldens after an intended output change with
``DIEOUT_REGEN_GOLDEN=1 pytest tests/test_cli.py -k golden``.
"""
import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from dieout.cli import main

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = [
    ("team_ex_specific", ["team", "--config", "ex_specific"], ["team.json"]),
    ("team_four_dim", ["team", "--config", "four_dim"], ["team.json"]),
    ("team_seven_dim", ["team", "--config", "seven_dim"], ["team.json"]),
    ("team_fourteen", ["team", "--config", "fourteen"], ["team.json"]),
    ("team_fourteen_reduced", ["team", "--config", "fourteen", "--reduce"], ["team.json"]),
    ("certify_ex_specific", ["certify", "--config", "ex_specific", "--beta", "e"], ["certificates.json"]),
    ("certify_four_dim_trap", ["certify", "--config", "four_dim", "--from-trap"], ["certificates.json"]),
    ("trophic_four_dim", ["check-trophic", "--config", "four_dim"], ["trophic.json"]),
    ("trophic_classic", ["check-trophic", "--config", "classic_lv"], ["trophic.json"]),
    ("halfplanes_balanced", ["halfplanes", "--config", "ex_specific_balanced", "--grid", "11"],
     ["halfplanes.csv", "vertices.csv"]),
    ("halfplanes_panel_a", ["halfplanes", "--config", "ex_specific", "--set-c", "2=-7/10", "--grid", "6"],
     ["vertices.csv"]),
    ("simulate_scalar", ["simulate", "--config", "scalar_decay"], ["trajectory.csv"]),
    ("simulate_ex_specific", ["simulate", "--config", "ex_specific"], ["trajectory.csv"]),
    ("simulate_oscillator", ["simulate", "--config", "ex_specific_oscillator"], ["events.csv"]),
    ("verify_scalar", ["verify", "--config", "scalar_decay"], ["dieout_report.json"]),
]


def run(argv, out):
    return main(list(argv) + ["--out", str(out)])


@pytest.mark.parametrize("name, argv, files", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden(name, argv, files, tmp_path):
    assert run(argv, tmp_path) == (1 if name == "trophic_classic" else 0)
    target = GOLDEN / name
    if os.environ.get("DIEOUT_REGEN_GOLDEN"):
        target.mkdir(parents=True, exist_ok=True)
        for f in files:
            shutil.copy(tmp_path / f, target / f)
    for f in files:
        assert (tmp_path / f).read_bytes() == (target / f).read_bytes(), f"{name}/{f} differs"


def test_team_prints_summary(tmp_path, capsys):
    assert run(["team", "--config", "fourteen"], tmp_path) == 0
    assert "k=3 members=28" in capsys.readouterr().out


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["team", "--config", str(bad)], tmp_path) == 2
    assert run(["team", "--config", "no_such_example"], tmp_path) == 2


def test_too_large_exit_3(tmp_path):
    assert run(["team", "--config", "fourteen", "--cap", "10"], tmp_path) == 3


def test_certify_hand_values(tmp_path):
    assert run(["certify", "--config", "ex_specific", "--beta", "e"], tmp_path) == 0
    rep = json.loads((tmp_path / "certificates.json").read_text())
    (m,) = rep["members"]
    assert m["a"] == pytest.approx(5 / 3, rel=1e-15)
    assert m["b_exact"] == "8/3" and m["nu_dot_C"] == "-8"
    assert rep["must_die"]["claims"][0]["claim"] == "x1 or x3 dies out"


@pytest.mark.parametrize("argv", [
    ["certify", "--config", "ex_specific_balanced"],
    ["certify", "--config", "ex_specific", "--set-c", "2=-3/5", "--beta", "2"],
])
def test_certify_balanced_exit_4(argv, tmp_path):
    assert run(argv, tmp_path) == 4


def test_certify_trivial_kernel_exit_5(tmp_path, capsys):
    cfg = {"C": ["1", "1"], "S": [["-1", "0"], ["0", "-1"]], "signal": {"type": "coupled"},
           "x0": [1, 1], "horizon": 1, "dt": 0.1}
    path = tmp_path / "inv.json"
    path.write_text(json.dumps(cfg))
    assert run(["certify", "--config", str(path), "--beta", "2"], tmp_path) == 5
    assert "kernel is trivial" in capsys.readouterr().out


def test_certify_from_trap(tmp_path):
    assert run(["certify", "--config", "four_dim", "--from-trap"], tmp_path) == 0
    rep = json.loads((tmp_path / "certificates.json").read_text())
    assert rep["beta_source"] == "trapping_region"
    assert rep["must_die"]["definite"] == [2, 4]


def test_certify_from_trap_not_trophic(tmp_path):
    assert run(["certify", "--config", "ex_specific", "--from-trap"], tmp_path) == 2


def test_verify_census_failure_exit_6(tmp_path, capsys):
    traj = tmp_path / "flat.csv"
    traj.write_text("t,x1\n0,1\n1,1\n2,1\n")
    assert run(["verify", "--config", "scalar_decay", "--traj", str(traj)], tmp_path) == 6
    assert "t=1" in capsys.readouterr().out


def test_verify_beta_mismatch_exit_7(tmp_path):
    traj = tmp_path / "up.csv"
    traj.write_text("t,x1\n0,1\n1,3\n")
    assert run(["verify", "--config", "scalar_decay", "--traj", str(traj)], tmp_path) == 7


def test_verify_blown_up_trajectory_exit_7(tmp_path):
    cfg = {"C": ["1"], "S": [["0"]], "signal": {"type": "constant", "Z": ["0"]},
           "x0": [1], "horizon": 100, "dt": 0.01, "beta": 10}
    path = tmp_path / "grow.json"
    path.write_text(json.dumps(cfg))
    assert run(["simulate", "--config", str(path)], tmp_path) == 9
    assert (tmp_path / "trajectory.csv").exists()
    out = run(["verify", "--config", str(path), "--traj", str(tmp_path / "trajectory.csv")], tmp_path)
    assert out == 7


def test_halfplanes_needs_two_resources_exit_8(tmp_path):
    assert run(["halfplanes", "--config", "four_dim"], tmp_path) == 8


def test_check_trophic_codes(tmp_path):
    assert run(["check-trophic", "--config", "classic_lv"], tmp_path) == 1
    assert run(["check-trophic", "--config", "ex_specific"], tmp_path) == 2
    assert run(["check-trophic", "--config", "seven_dim"], tmp_path) == 0


def test_simulate_then_verify_four_dim(tmp_path):
    assert run(["simulate", "--config", "four_dim"], tmp_path) == 0
    assert run(["verify", "--config", "four_dim", "--traj", str(tmp_path / "trajectory.csv")], tmp_path) == 0
    rep = json.loads((tmp_path / "dieout_report.json").read_text())
    assert rep["k"] == 2 and rep["min_census"] >= 2 and rep["pass"]


def test_verify_dimension_mismatch(tmp_path):
    traj = tmp_path / "two.csv"
    traj.write_text("t,x1,x2\n0,1,1\n")
    assert run(["verify", "--config", "scalar_decay", "--traj", str(traj)], tmp_path) == 2


def test_out_directory_created(tmp_path):
    out = tmp_path / "a" / "b"
    assert run(["team", "--config", "ex_specific"], out) == 0
    assert (out / "team.json").exists()


def test_help_documents_flags(capsys):
    for cmd, flags in [("certify", ["--beta", "--from-trap", "--traj"]),
                       ("verify", ["--traj", "--beta"]),
                       ("halfplanes", ["--grid", "--zmax"]),
                       ("team", ["--max-support", "--reduce", "--cap"])]:
        with pytest.raises(SystemExit):
            main([cmd, "--help"])
        text = capsys.readouterr().out
        assert all(f in text for f in flags + ["--config", "--out"])


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "dieout", "team", "--config", "ex_specific",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "k=1 members=1" in proc.stdout
