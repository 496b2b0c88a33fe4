import io
import json
import math
import subprocess
import sys

import pytest

from heraldqubit.cli import main
from heraldqubit.sweep import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sweep_to_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--gamma-range", "0:2:3", "--phi-range", "0:pi:4")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert len(records) == 12
    assert [r.phi for r in records[:3]] == [0.0, 0.0, 0.0]


def test_sweep_single_point(capsys):
    code, out, _ = run(capsys, "sweep", "--gamma", "0", "--phi", "pi/3", "--eta", "0.5")
    assert code == 0
    (rec,) = read_csv(io.StringIO(out))
    assert rec.p_yn == pytest.approx(0.1875, abs=1e-15)


def test_sweep_json_both(tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, _ = run(
        capsys, "sweep", "--gamma-range", "0:2:5", "--phi-range", "0:pi:5",
        "--mode", "both", "--format", "json", "--out", str(out),
    )
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 25
    assert max(abs(r["dp"]) for r in rows) <= 1e-8
    assert max(abs(r["dF"]) for r in rows if r["dF"] is not None) <= 1e-8


def test_sweep_writes_gnuplot(tmp_path, capsys):
    grid = tmp_path / "grid.dat"
    code, _, _ = run(capsys, "sweep", "--gamma-range", "0:1:3", "--phi-range", "0:1:3",
                     "--out", str(tmp_path / "s.csv"), "--gnuplot", str(grid))
    assert code == 0
    assert grid.read_text().count("\n\n") == 2


def test_sweep_unwritable_path(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--gamma-range", "0:1:2", "--phi-range", "0:1:2",
                       "--out", str(tmp_path / "missing" / "s.csv"))
    assert code == 2
    assert "cannot write" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--eta", "1.2"],
        ["sweep", "--gamma-range", "0:1"],
        ["sweep", "--gamma-range", "-1:1:3"],
        ["sweep", "--cutoff", "huge"],
        ["sweep", "--outcome", "yy"],
        ["frobnicate"],
        [],
        ["verify", "--grid", "1"],
        ["design"],
        ["point", "--gamma", "1", "--phi", "0.5", "--eta", "2"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 64


def test_verify_small_grid(capsys):
    code, out, _ = run(capsys, "verify", "--eta", "0.8", "--grid", "3")
    assert code == 0
    assert "verification passed" in out


def test_verify_reports_vacuum_projector_at_unit_efficiency(capsys):
    code, out, _ = run(capsys, "verify", "--eta", "1.0", "--grid", "3")
    assert code == 0
    assert "vacuum projector" in out


def test_verify_catches_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", "--eta", "0.8", "--grid", "3", "--inject-fault")
    assert code == 1
    assert "FAILED" in out


def test_design(capsys):
    code, out, _ = run(capsys, "design", "--eta", "0.8", "--p-min", "0.195")
    assert code == 0
    fields = dict(line.split(None, 1) for line in out.splitlines())
    assert float(fields["F*"]) >= 0.9
    assert float(fields["P_YN*"]) >= 0.195


def test_design_target(capsys):
    code, out, _ = run(capsys, "design", "--eta", "1.0", "--p-min", "0.4", "--target", "1,0")
    assert code == 0
    fields = dict(line.split(None, 1) for line in out.splitlines())
    assert fields["family"] == "phi=pi/2"
    assert float(fields["gamma*"]) == 0
    assert float(fields["F*"]) == pytest.approx(1.0, abs=1e-15)
    assert float(fields["P_YN*"]) == pytest.approx(0.5, abs=1e-15)


def test_design_infeasible(capsys):
    code, out, _ = run(capsys, "design", "--p-min", "0.99")
    assert code == 3
    assert "max achievable P_YN" in out


def test_point(capsys):
    code, out, _ = run(capsys, "point", "--gamma", "1", "--phi", "0.6")
    assert code == 0
    assert "[analytic]" in out and "[numeric, cutoff" in out


def test_point_complex_gamma(capsys):
    code, out, _ = run(capsys, "point", "--gamma", "0.5+0.5j", "--phi", "pi/4", "--mode", "numeric")
    assert code == 0


def test_point_vanishing_outcome(capsys):
    code, _, err = run(capsys, "point", "--gamma", "0", "--phi", "0")
    assert code == 64
    assert "vanishing" in err


def test_module_entry_point_is_byte_deterministic(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        subprocess.run(
            [sys.executable, "-m", "heraldqubit", "sweep", "--gamma-range", "0:2:9",
             "--phi-range", "0:pi:9", "--mode", "both", "--out", str(path)],
            check=True,
        )
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].count(b"\n") == 82
