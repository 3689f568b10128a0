"""Secondary-component tests: render every figure kind from the committed
calibration CSVs and fail loudly on schema mismatch."""

import subprocess
import sys
from pathlib import Path

import pytest

PLOTS = Path(__file__).resolve().parent.parent
ROOT = PLOTS.parent
CAL = ROOT / "calibration"


def run_script(script: str, inp: Path, out: Path):
    return subprocess.run(
        [sys.executable, str(PLOTS / script), "--in", str(inp), "--out", str(out)],
        capture_output=True,
        text=True,
    )


@pytest.mark.parametrize(
    "script,csv",
    [
        ("chaos.py", CAL / "chaos_n2000" / "chaos_summary.csv"),
        ("zk.py", CAL / "zk" / "zk.csv"),
        ("sampling.py", CAL / "sampling_combined.csv"),
    ],
)
def test_renders_committed_calibration(script, csv, tmp_path):
    out = tmp_path / (script + ".png")
    res = run_script(script, csv, out)
    assert res.returncode == 0, res.stderr
    assert out.exists() and out.stat().st_size > 1000


def test_deterministic_output(tmp_path):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    csv = CAL / "chaos_n2000" / "chaos_summary.csv"
    assert run_script("chaos.py", csv, a).returncode == 0
    assert run_script("chaos.py", csv, b).returncode == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "script,wrong_csv",
    [
        ("chaos.py", CAL / "zk" / "zk.csv"),
        ("zk.py", CAL / "chaos_n2000" / "chaos_summary.csv"),
        ("sampling.py", CAL / "zk" / "zk_summary.csv"),
    ],
)
def test_schema_mismatch_fails_loudly(script, wrong_csv, tmp_path):
    res = run_script(script, wrong_csv, tmp_path / "x.png")
    assert res.returncode == 2
    assert "schema" in res.stderr
    assert not (tmp_path / "x.png").exists()


def test_empty_csv_is_an_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("n,s,trials,mean_w2sq_lower,pooled_se\n")
    res = run_script("chaos.py", empty, tmp_path / "x.png")
    assert res.returncode == 1
    assert "empty" in res.stderr


def test_missing_column_csv_is_schema_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("n,k,trials,success_rate\n10,2,5,1.0\n")
    res = run_script("sampling.py", bad, tmp_path / "x.png")
    assert res.returncode == 2
