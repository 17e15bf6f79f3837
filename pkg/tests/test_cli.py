import json
import shutil
import subprocess
from pathlib import Path

import pytest

from conftest import MIXED, run_cli, subset_by_labels
from tcarank.io import format_orderings

FIX = Path(__file__).resolve().parents[1] / "src" / "tcarank" / "fixtures"
TABLE1 = FIX / "table1.csv"


def test_help():
    cp = run_cli("--help")
    assert cp.returncode == 0
    for cmd in ("analyze", "ghc", "decompose", "simulate"):
        assert cmd in cp.stdout


def test_analyze_table1(tmp_path):
    cp = run_cli("analyze", "--input", TABLE1, "--out-dir", tmp_path)
    assert cp.returncode == 0, cp.stderr
    assert "3 groups, 1 outlier sets" in cp.stdout
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "report.json" in names and "assignments.csv" in names
    assert {"scores_G1.csv", "biplot_G1_1x2.svg", "biplot_G3_2x3.svg"} <= set(names)
    assert not any(n.endswith(".tmp") for n in names)
    assign = (tmp_path / "assignments.csv").read_text().splitlines()
    assert assign[0] == "pattern,group,weight"
    assert "DACB30,O1,30" in assign
    report = json.loads((tmp_path / "report.json").read_text())
    assert [leaf["id"] for leaf in report["leaves"]] == ["G1", "G2", "G3", "O1"]


def test_analyze_is_byte_stable(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli("analyze", "--input", TABLE1, "--out-dir", out).returncode == 0
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_analyze_top_k(tmp_path):
    cp = run_cli("analyze", "--input", TABLE1, "--top-k", "2", "--out-dir", tmp_path)
    assert cp.returncode == 0, cp.stderr
    assert "2 groups, 0 outlier sets" in cp.stdout
    assert "GHC: 74.80%" in cp.stdout and "GHC: 52.43%" in cp.stdout


def test_empty_file_exit3(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    cp = run_cli("analyze", "--input", p, "--out-dir", tmp_path / "o")
    assert cp.returncode == 3


def test_parse_error_line_number(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("ordering,weight\nA>B>C,1\nA>A>B,1\n")
    cp = run_cli("ghc", "--input", p)
    assert cp.returncode == 3
    assert "line 3" in cp.stderr


def test_missing_file_exit2(tmp_path):
    cp = run_cli("ghc", "--input", tmp_path / "nope.csv")
    assert cp.returncode == 2


def test_unwritable_out_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cp = run_cli("analyze", "--input", TABLE1, "--out-dir", blocker / "sub")
    assert cp.returncode == 2


def test_ghc_two_voters():
    cp = run_cli("ghc", "--input", FIX / "artificial_two_voters.csv")
    assert cp.returncode == 0
    assert "GHC 100.00" in cp.stdout
    assert "faithful voters 2 of 2" in cp.stdout


def test_ghc_singleton(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("ordering,weight\nB>A>C,4\n")
    cp = run_cli("ghc", "--input", p)
    assert cp.returncode == 0 and "GHC 100.00" in cp.stdout


def test_ghc_table1_exit4():
    cp = run_cli("ghc", "--input", TABLE1)
    assert cp.returncode == 4
    listed = [line.strip() for line in cp.stdout.splitlines() if line.startswith("  ")]
    assert len(listed) == 16 and "DACB30" in listed


def test_ghc_ranks_format(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("A,B,C,D,__weight\n1,2,3,4,3\n2,1,3,4,1\n")
    cp = run_cli("ghc", "--input", p, "--format", "ranks")
    assert cp.returncode == 0, cp.stderr


def test_decompose_mixed(tmp_path, table1):
    p = tmp_path / "mixed.csv"
    p.write_text(format_orderings(subset_by_labels(table1, MIXED)))
    cp = run_cli("decompose", "--input", p, "--k", "3", "--out-dir", tmp_path)
    assert cp.returncode == 0, cp.stderr
    assert "lambda 0.4855 0.2308 0.0657" in cp.stdout
    rows = (tmp_path / "scores.csv").read_text().splitlines()
    assert rows[0] == "kind,label,axis,score"
    assert len(rows) == 1 + 3 * (5 + 1 + 4)


@pytest.mark.parametrize("k", ["0", "9"])
def test_decompose_bad_k(k, tmp_path):
    cp = run_cli("decompose", "--input", TABLE1, "--k", k, "--out-dir", tmp_path)
    assert cp.returncode == 2


def test_simulate_seeded(tmp_path):
    a = run_cli("simulate", "--kind", "faithful", "--d", "6", "--n", "5", "--seed", "7")
    b = run_cli("simulate", "--kind", "faithful", "--d", "6", "--n", "5", "--seed", "7")
    assert a.returncode == 0 and a.stdout == b.stdout
    p = tmp_path / "sim.csv"
    p.write_text(a.stdout)
    cp = run_cli("ghc", "--input", p)
    assert "GHC 100.00" in cp.stdout


def test_simulate_swap(tmp_path):
    p = tmp_path / "swap.csv"
    assert run_cli("simulate", "--kind", "swap", "--d", "6", "--n", "8", "--output", p).returncode == 0
    cp = run_cli("ghc", "--input", p)
    assert cp.returncode == 0
    assert "GHC 100.00" not in cp.stdout


def test_bad_option_values(tmp_path):
    cp = run_cli("analyze", "--input", TABLE1, "--outlier-threshold", "1.5", "--out-dir", tmp_path)
    assert cp.returncode == 2
    cp = run_cli("analyze", "--input", TABLE1, "--top-k", "4", "--out-dir", tmp_path)
    assert cp.returncode == 3


def test_console_script_installed():
    exe = shutil.which("tcarank")
    if exe is None:
        pytest.skip("console script not on PATH")
    cp = subprocess.run([str(exe), "--version"], capture_output=True, text=True)
    assert cp.returncode == 0 and cp.stdout.strip().startswith("tcarank")
