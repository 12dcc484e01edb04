"""Command line interface: parsing, artifacts, exit codes, reproducibility."""

from __future__ import annotations

import re
import shutil
import subprocess

import numpy as np
import pytest

from burnback.cli import RunSpec, main, parse_args


# -------------------------------------------------------------------- parsing


def test_parse_args_fuses_nested_subcommands():
    spec = parse_args(["star", "neutral", "--n", "6"])
    assert spec.subcommand == "star-neutral"
    assert spec.options["n"] == 6
    assert spec.options["dump_spec"] is False


def test_parse_args_solve_defaults():
    spec = parse_args(["solve", "--case", "rect", "--out", "field.csv"])
    assert spec.subcommand == "solve"
    assert spec.options["case"] == "rect"
    assert spec.options["mesh"] is None
    assert spec.options["rate"] is None
    assert spec.options["out"] == "field.csv"
    assert spec.options["max_steps"] is None


def test_runspec_validation():
    with pytest.raises(ValueError):
        RunSpec("", {})
    with pytest.raises(ValueError):
        RunSpec("solve", {"out": ""})


def test_usage_errors_exit_2():
    assert main(["bogus"]) == 2
    assert main(["star", "neutral"]) == 2  # --n is required
    assert main(["mesh", "info", "--mesh", "a", "--case", "rect"]) == 2
    assert main(["--help"]) == 0


# ------------------------------------------------------------------ formulas


def test_star_neutral_prints_published_angle(capsys):
    assert main(["star", "neutral", "--n", "5"]) == 0
    out = capsys.readouterr().out
    m = re.search(r"theta/2 = ([0-9.]+) deg", out)
    assert m, out
    assert abs(float(m.group(1)) - 31.12) <= 0.02


def test_star_neutral_rejects_small_n(capsys):
    assert main(["star", "neutral", "--n", "3"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("star.ValueError:")


def test_bistar_design_prints_reference_ratio(capsys):
    argv = ["bistar", "design", "--n", "4", "--rc", "1.0", "--rf", "0.1", "--d", "0.5"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert re.search(r"^f\s+= 1\.592$", out, re.MULTILINE), out
    assert re.search(r"^omega\s+= 0\.4$", out, re.MULTILINE), out


def test_bistar_interface_writes_csv(tmp_path, capsys):
    out = tmp_path / "face.csv"
    argv = [
        "bistar", "interface", "--n", "4", "--rc", "1.0", "--rf", "0.1",
        "--d", "0.5", "--samples", "64", "--out", str(out),
    ]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "y,r1,theta1,r2,theta2"
    assert len(lines) == 1 + 64
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == 0.0 and first[1] == pytest.approx(0.6)


def test_dump_spec_prints_resolved_runspec(capsys):
    assert main(["star", "neutral", "--n", "5", "--dump-spec"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("RunSpec(")
    assert "star-neutral" in out


# ------------------------------------------------------------ mesh and solve


def test_mesh_gen_info_round_trip(tmp_path, capsys):
    path = tmp_path / "rect.mesh"
    assert main(["mesh", "gen", "--case", "rect", "--out", str(path)]) == 0
    assert main(["mesh", "info", "--mesh", str(path)]) == 0
    out = capsys.readouterr().out
    assert "1891 nodes" in out
    assert "IGNITION 31" in out
    assert "symmetry lines" in out


def test_mesh_info_missing_file_reports_module(tmp_path, capsys):
    assert main(["mesh", "info", "--mesh", str(tmp_path / "nope.mesh")]) == 1
    err = capsys.readouterr().err
    assert err.startswith("cli.FileNotFoundError:")


def test_solve_from_mesh_file_writes_field_and_residuals(tmp_path, capsys):
    path = tmp_path / "rect.mesh"
    field = tmp_path / "field.csv"
    hist = tmp_path / "hist.csv"
    assert main(["mesh", "gen", "--case", "rect", "--out", str(path)]) == 0
    argv = [
        "solve", "--mesh", str(path), "--rate", "1.0",
        "--out", str(field), "--residuals", str(hist),
    ]
    assert main(argv) == 0
    rows = field.read_text().splitlines()
    assert rows[0] == "node,x,y,s"
    assert len(rows) == 1 + 1891
    # the planar oracle: s equals x on every node
    data = np.loadtxt(rows[1:], delimiter=",")
    assert np.abs(data[:, 3] - data[:, 1]).max() < 0.005
    assert hist.read_text().splitlines()[0] == "step,dt,max_residual"


def test_solve_nonconvergence_exits_1(tmp_path, capsys):
    out = tmp_path / "field.csv"
    argv = ["solve", "--case", "rect", "--out", str(out), "--max-steps", "5"]
    assert main(argv) == 1
    assert "quiet-step" in capsys.readouterr().err
    assert out.exists()  # partial field still written for inspection


def test_curves_planar_perimeter_constant(tmp_path):
    out = tmp_path / "curves.csv"
    argv = ["curves", "--case", "rect", "--out", str(out), "--tau-count", "9"]
    assert main(argv) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "tau,P_b,A_p,A_eq"
    data = np.loadtxt(rows[1:], delimiter=",")
    np.testing.assert_allclose(data[:, 1], 1.0, rtol=1e-4)  # unit-height block
    np.testing.assert_allclose(data[:, 2], data[:, 0], rtol=1e-3)  # A_p = tau * 1


def test_curves_grain_length_adds_column(tmp_path):
    out = tmp_path / "curves.csv"
    argv = [
        "curves", "--case", "rect", "--out", str(out),
        "--tau-count", "5", "--grain-length", "3.0",
    ]
    assert main(argv) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "tau,P_b,A_p,A_eq,A_b"
    data = np.loadtxt(rows[1:], delimiter=",")
    np.testing.assert_allclose(data[:, 4], 3.0 * data[:, 1], rtol=1e-12)


def test_contours_level_count(tmp_path):
    out = tmp_path / "iso.svg"
    argv = ["contours", "--case", "rect", "--out", str(out), "--nlevels", "3"]
    assert main(argv) == 0
    svg = out.read_text()
    assert svg.count('<g class="isochrone"') == 3

    argv = ["contours", "--case", "rect", "--out", str(out), "--levels", "0.5,1.0"]
    assert main(argv) == 0
    svg = out.read_text()
    assert svg.count('<g class="isochrone"') == 2
    assert 'data-tau="0.5"' in svg


def test_artifacts_are_byte_identical_across_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["curves", "--case", "rect", "--out", str(path), "--tau-count", "7"]) == 0
    assert a.read_bytes() == b.read_bytes()

    sa, sb = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (sa, sb):
        assert main(["contours", "--case", "rect", "--out", str(path), "--nlevels", "2"]) == 0
    assert sa.read_bytes() == sb.read_bytes()


# ---------------------------------------------------------------- end-to-end


def test_verify_slot_passes_at_both_budgets(capsys):
    assert main(["verify", "slot", "--nodes", "2500"]) == 0
    coarse = capsys.readouterr().out
    m = re.search(r"max normalized error ([0-9.]+)% vs threshold 1%: PASS", coarse)
    assert m, coarse

    assert main(["verify", "slot", "--nodes", "10000"]) == 0
    fine = capsys.readouterr().out
    m2 = re.search(r"max normalized error ([0-9.]+)% vs threshold 0\.5%: PASS", fine)
    assert m2, fine

    # refining 4x in nodes must strictly reduce the max error
    assert float(m2.group(1)) < float(m.group(1))


def test_console_script_is_installed():
    exe = shutil.which("burnback")
    assert exe, "console script not on PATH"
    proc = subprocess.run(
        [exe, "star", "neutral", "--n", "7"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert "theta/2 = 35.5" in proc.stdout
