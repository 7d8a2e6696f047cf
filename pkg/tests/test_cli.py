import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from trilat import HitDistribution, lattice_from_sides, needle_distribution, santalo_equilateral
from trilat.cli import RunConfig, InputError, main, sweep_rows

SANTALO = santalo_equilateral(0.5, 1.0)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_needle(capsys):
    code, out, _ = run(capsys, "compute", "--lattice", "1,1,1", "--needle", "0.5")
    assert code == 0
    assert "method: closed_form" in out
    assert f"p(1) = {SANTALO.p[0]:.9f}" in out
    assert "p(1) = 0.2018" in out


def test_compute_disc(capsys):
    code, out, _ = run(capsys, "compute", "--lattice", "3,4,5", "--disc", "0.3")
    assert code == 0
    p6 = float(out.split("p(6) = ")[1].split()[0])
    assert p6 == pytest.approx(math.pi * 0.09 / 12, abs=1e-9)
    assert p6 == pytest.approx(0.0235619, abs=1e-7)


def test_oversized_needle(capsys):
    code, _, err = run(capsys, "compute", "--lattice", "1,1,1", "--needle", "2")
    assert code == 2
    assert "margin -" in err


def test_force_extrapolates(capsys):
    with pytest.warns(UserWarning):
        code, out, _ = run(capsys, "compute", "--lattice", "1,1,1", "--disc", "0.4", "--force")
    assert code == 0
    assert "extrapolated" in out


@pytest.mark.parametrize("argv", [
    ["compute", "--lattice", "1,1,3", "--needle", "0.5"],
    ["compute", "--lattice", "1,1", "--needle", "0.5"],
    ["compute", "--lattice", "1,1,1", "--needle", "-0.5"],
    ["compute", "--lattice", "1,1,1", "--ellipse", "0.2,0.4"],
    ["compute", "--lattice", "1,1,1", "--needle", "0.5", "--tol", "0"],
    ["compute", "--lattice", "1,1,1"],
    ["compute", "--lattice", "1,1,1", "--polygon", "/nonexistent/file.txt"],
    ["sweep", "--lattice", "1,1,1", "--needle", "0.5", "--param", "ell", "--range", "0:0.5", "--steps", "1"],
    ["sweep", "--lattice", "1,1,1", "--needle", "0.5", "--param", "zz", "--range", "0:0.5"],
    ["compare", "--lattice", "1,1,1", "--needle", "0.5", "--n", "100"],
])
def test_bad_input_exit_4(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == 4


def test_quadrature_failure_exit_3(capsys):
    code, _, err = run(capsys, "compute", "--lattice", "1,1,1", "--halfdisc", "0.1",
                       "--method", "theorem1", "--tol", "1e-300")
    assert code == 3
    assert "numerical failure" in err


def test_json_roundtrip_bit_exact(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, _, _ = run(capsys, "compute", "--lattice", "3,4,5", "--halfdisc", "0.25", "-o", str(path))
    assert code == 0
    payload = json.loads(path.read_text())
    back = HitDistribution.from_dict(payload["distribution"])
    from trilat import half_disc_distribution

    direct = half_disc_distribution(0.25, lattice_from_sides(3, 4, 5))
    assert back == direct
    assert payload["config"]["lattice"] == [3.0, 4.0, 5.0]


def test_csv_17_digits(tmp_path, capsys):
    path = tmp_path / "out.csv"
    run(capsys, "compute", "--lattice", "1,1,1", "--needle", "0.5", "-o", str(path))
    rows = list(csv.DictReader(path.open()))
    exact = needle_distribution(0.5, lattice_from_sides(1, 1, 1))
    # 17 significant digits reproduce every double
    assert [float(rows[0][f"p{i}"]) for i in range(1, 7)] == list(exact.p)
    assert float(rows[0]["expectation"]) == exact.expectation
    fmt = tmp_path / "forced.txt"
    run(capsys, "compute", "--lattice", "1,1,1", "--needle", "0.5", "-o", str(fmt), "--format", "csv")
    assert fmt.read_text().startswith("p1,p2")


def test_polygon_file(tmp_path, capsys):
    f = tmp_path / "square.txt"
    f.write_text("# unit square scaled down\n0 0\n0.2 0\n0.2 0.2\n0 0.2\n")
    code, out, _ = run(capsys, "compute", "--lattice", "3,4,5", "--polygon", str(f))
    assert code == 0
    code2, out2, _ = run(capsys, "compute", "--lattice", "3,4,5", "--rect", "0.2,0.2", "--method", "theorem1")
    pick = lambda text: [line for line in text.splitlines() if line.startswith("p(")]
    np.testing.assert_allclose([float(l.split("=")[1]) for l in pick(out)],
                               [float(l.split("=")[1]) for l in pick(out2)], atol=1e-8)


def test_halfdisc_on_obtuse_lattice_uses_engine(capsys):
    code, out, _ = run(capsys, "compute", "--lattice", f"{3 * math.sqrt(7)},3,6", "--halfdisc", "0.2")
    assert code == 0 and "method: theorem1" in out
    code, _, _ = run(capsys, "compute", "--lattice", f"{3 * math.sqrt(7)},3,6", "--halfdisc", "0.2",
                     "--method", "closed")
    assert code == 4


def test_simulate_method(capsys):
    code, out, _ = run(capsys, "compute", "--lattice", "1,1,1", "--needle", "0.5", "--method", "simulate",
                       "--n", "20000", "--seed", "5")
    assert code == 0 and "method: simulation" in out and "seed = 5" in out


def test_compare_pass_and_perturbed_fail(capsys, tmp_path):
    path = tmp_path / "cmp.json"
    args = ["compare", "--lattice", "3,4,5", "--halfdisc", "0.1", "--n", "200000", "--seed", "1"]
    code, out, _ = run(capsys, *args, "-o", str(path))
    assert code == 0 and out.strip().endswith("PASS")
    payload = json.loads(path.read_text())
    assert payload["seed"] == 1 and payload["passed"] is True
    assert len(payload["rows"]) == 6
    code, out, _ = run(capsys, *args, "--perturb", "1:0.01")
    assert code == 1 and out.strip().endswith("FAIL")


def test_seed_from_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("TRILAT_SEED", "123")
    path = tmp_path / "sim.json"
    run(capsys, "compute", "--lattice", "1,1,1", "--disc", "0.1", "--method", "simulate", "--n", "1000", "-o", str(path))
    assert json.loads(path.read_text())["simulation"]["seed"] == 123
    monkeypatch.delenv("TRILAT_SEED")
    run(capsys, "compute", "--lattice", "1,1,1", "--disc", "0.1", "--method", "simulate", "--n", "1000", "-o", str(path))
    assert json.loads(path.read_text())["simulation"]["seed"] == 0


def test_sweep_santalo_column(capsys):
    alt = math.sqrt(3) / 2
    code, out, _ = run(capsys, "sweep", "--lattice", "1,1,1", "--needle", "0.5", "--param", "ell",
                       "--range", f"0:{alt!r}", "--steps", "20")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["param", "p1", "p2", "p3", "p4", "p5", "p6", "expectation", "margin"]
    assert len(rows) == 20
    ells = [float(r["param"]) for r in rows]
    assert ells == sorted(ells)
    for r in rows:
        ell = float(r["param"])
        quad = 1 - (4 * math.sqrt(3) / math.pi) * ell + (math.sqrt(3) / math.pi + 2 / 3) * ell**2
        assert float(r["p1"]) == pytest.approx(quad, abs=1e-12)
        assert sum(float(r[f"p{i}"]) for i in range(1, 7)) == pytest.approx(1.0, abs=1e-9)


def test_sweep_blank_rows_when_too_large(capsys):
    code, out, _ = run(capsys, "sweep", "--lattice", "1,1,1", "--disc", "0.1", "--param", "r",
                       "--range", "0.1:0.5", "--steps", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2
    assert rows[0]["p1"] != "" and float(rows[0]["margin"]) > 0
    assert rows[1]["p1"] == "" and float(rows[1]["margin"]) < 0
    forced = sweep_rows(RunConfig(lattice=(1, 1, 1), shape="disc", params=(0.1,), force=True), "r", 0.1, 0.5, 2)
    assert forced[1]["p1"] is not None


def test_sweep_lattice_side(capsys):
    code, out, _ = run(capsys, "sweep", "--lattice", "3,4,5", "--rect", "0.4,0.2", "--param", "c",
                       "--range", "4.5:6", "--steps", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["param"]) for r in rows] == [4.5, 5.25, 6.0]


def test_runconfig_validation():
    with pytest.raises(InputError):
        RunConfig(lattice=(1, 1, 1), shape="needle", params=(-1.0,))
    with pytest.raises(InputError):
        RunConfig(lattice=(1, 1, 1), shape="needle", params=(1.0,), n=0)


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "trilat.cli", "compute", "--lattice", "1,1,1", "--needle", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
