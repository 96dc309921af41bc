import json
import math
import subprocess
import sys

import pytest

from blochcount import build_cell, save_potential
from blochcount.cli import run_cli


@pytest.fixture()
def cell_file(tmp_path):
    cell = build_cell(1.0, [(0.0, 0.6, 0.0), (0.6, 1.0, 20.0)])
    path = tmp_path / "cell.json"
    save_potential(cell, path)
    return str(path)


def test_bands_csv_header_and_exit(cell_file, capsys):
    rc = run_cli(["bands", "--cell", cell_file,
                  "--emin", "-2", "--emax", "40", "--grid", "9"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "E,TrM,p,zone_kind,gap_index"
    assert len(lines) == 10


def test_scatter_csv(cell_file, capsys):
    rc = run_cli(["scatter", "--pot", cell_file, "--n", "3",
                  "--emin", "1", "--emax", "30", "--grid", "5"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "E,Re T,Im T,|T|^2,Re R,Im R"
    # |T|^2 column stays in [0, 1]
    for row in lines[1:]:
        t2 = float(row.split(",")[3])
        assert 0.0 <= t2 <= 1.0 + 1e-12


def test_resonances_json(cell_file, capsys):
    rc = run_cli(["resonances", "--cell", cell_file, "--n", "4",
                  "--emax", "60", "--format", "json"])
    out = capsys.readouterr().out
    assert rc == 0
    doc = json.loads(out)
    assert doc["columns"] == ["lambda", "origin_tag", "abs_R"]
    assert doc["all_pass"] is False
    assert all(r[2] < 1e-6 for r in doc["rows"])


def test_sl_and_periodic_and_count(cell_file, capsys):
    rc = run_cli(["sl", "--pot", cell_file, "--n", "2",
                  "--alpha", "dirichlet", "--beta", "dirichlet",
                  "--emax", "50"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == "E_j,index"
    n_sl = len(out.strip().splitlines()) - 1

    rc = run_cli(["count", "--pot", cell_file, "--n", "2",
                  "--alpha", "0", "--beta", str(math.pi), "--emax", "50"])
    out = capsys.readouterr().out
    assert rc == 0
    assert int(out.strip()) == n_sl

    rc = run_cli(["periodic", "--cell", cell_file, "--n", "2",
                  "--flavor", "skew", "--emax", "50"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == "E_j,multiplicity"


def test_usage_and_runtime_errors(cell_file, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(["bands"])  # missing required arguments
    assert exc.value.code == 2

    rc = run_cli(["count", "--pot", cell_file, "--emax", "5"])
    assert rc == 2  # bound-state count needs emax <= 0
    assert "error:" in capsys.readouterr().err

    missing = str(tmp_path / "nope.json")
    rc = run_cli(["scatter", "--pot", missing,
                  "--emin", "1", "--emax", "2", "--grid", "2"])
    assert rc == 2

    rc = run_cli(["scatter", "--pot", cell_file,
                  "--emin", "-1", "--emax", "2", "--grid", "2"])
    assert rc == 2

    # --n accepts a comma list syntactically, but single-n commands reject it
    rc = run_cli(["scatter", "--pot", cell_file, "--n", "2,4",
                  "--emin", "1", "--emax", "2", "--grid", "2"])
    assert rc == 2
    with pytest.raises(SystemExit) as exc:
        run_cli(["scatter", "--pot", cell_file, "--n", "x",
                 "--emin", "1", "--emax", "2", "--grid", "2"])
    assert exc.value.code == 2


def test_count_E_alias(cell_file, capsys):
    rc = run_cli(["count", "--pot", cell_file, "--flavor", "periodic",
                  "--E", "50"])
    out = capsys.readouterr().out
    assert rc == 0
    assert int(out.strip()) >= 1


def test_byte_identical_output(cell_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for target in (a, b):
        rc = run_cli(["bands", "--cell", cell_file, "--emin", "0",
                      "--emax", "90", "--grid", "50", "--out", str(target)])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_subcommand_writes_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = run_cli(["verify", "--suite", "theorem3", "--seed", "1",
                  "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["suite"] == "theorem3"
    assert doc["seed"] == 1
    assert doc["summary"]["fail"] == 0
    assert doc["records"]


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "blochcount.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "bands" in proc.stdout and "verify" in proc.stdout
