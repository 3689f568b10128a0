import json
from pathlib import Path

import pytest

from hardcore.cli import main
from hardcore.experiments import ExperimentConfig, resolve_k
from hardcore.graphs import load_graph


def test_config_round_trip_lossless():
    cfg = ExperimentConfig(
        experiment="chaos",
        n=2000,
        n_sweep=(10, 12),
        p=0.5,
        lam=1.0,
        s_sweep=(0.0, 0.25, 1.0),
        size_constant=21.0,
        window_radius=3,
        k=8,
        trials=7,
        cert_samples=16,
        master_seed=424242,
        out_dir="somewhere",
        exact=True,
        parallelism=2,
        horizon_factor=50,
        extend=False,
        coupled=True,
    )
    assert ExperimentConfig.from_text(cfg.to_text()) == cfg


def test_config_file_round_trip(tmp_path):
    cfg = ExperimentConfig(experiment="zk", n=64, k=3, trials=5)
    cfg.save(tmp_path / "c.cfg")
    assert ExperimentConfig.load(tmp_path / "c.cfg") == cfg


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        ExperimentConfig(p=1.5)
    with pytest.raises(ValueError):
        ExperimentConfig(s_sweep=(0.5, 2.0))
    with pytest.raises(ValueError):
        ExperimentConfig.from_text("not_a_key=3\n")


def test_resolve_k_explicit_and_fallback():
    assert resolve_k(ExperimentConfig(k=6), 4096) == 6
    # formula is nonpositive at desk scale -> concentration point
    assert resolve_k(ExperimentConfig(size_constant=30.0), 2000) == 8
    assert resolve_k(ExperimentConfig(size_constant=7.0), 2000) == 8


def test_cli_gen_round_trip(tmp_path):
    out = tmp_path / "g.hcg"
    assert main(["gen", "--n", "9", "--p", "0.5", "--seed", "4", "--out", str(out)]) == 0
    g = load_graph(out)
    assert g.n == 9


def test_cli_usage_error_exit_2():
    assert main(["definitely-not-a-command"]) == 2


def test_cli_budget_exit_3(tmp_path):
    assert main(["gen", "--n", str(1 << 15), "--out", str(tmp_path / "g.hcg")]) == 3


def test_cli_verify_quick(tmp_path):
    rc = main(["verify", "--quick", "--seed", "12345", "--out", str(tmp_path)])
    assert rc == 0
    verdicts = json.loads((tmp_path / "verify.json").read_text())
    assert all(v["verdict"] for v in verdicts)
    assert {v["check_name"] for v in verdicts} >= {"detailed_balance", "time_reversal"}


def test_cli_chaos_exact_and_certificate_validity(tmp_path):
    rc = main([
        "chaos", "--n", "10", "--trials", "2", "--seed", "7",
        "--s-sweep", "0.0,1.0", "--exact", "--out", str(tmp_path / "chaos"),
    ])
    assert rc == 0
    lines = (tmp_path / "chaos/chaos.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == [
        "n", "s", "trial", "overlap_bound", "m2_left", "m2_right",
        "w2sq_lower", "stderr", "fail_rate", "w2sq_exact",
    ]
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        assert float(row["w2sq_lower"]) <= float(row["w2sq_exact"]) + 1e-9
        if row["s"] == "0.0":
            assert abs(float(row["w2sq_lower"])) < 1e-9


def test_cli_parallelism_does_not_change_output(tmp_path):
    args = ["chaos", "--n", "32", "--k", "2", "--trials", "4", "--seed", "3",
            "--s-sweep", "0.5", "--cert-samples", "8"]
    assert main(args + ["--out", str(tmp_path / "a"), "--parallelism", "1"]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--parallelism", "2"]) == 0
    assert (tmp_path / "a/chaos.csv").read_text() == (tmp_path / "b/chaos.csv").read_text()


def test_cli_resume_is_byte_identical(tmp_path):
    args = ["zk", "--n-sweep", "32,64", "--k", "3", "--trials", "6", "--seed", "5",
            "--out", str(tmp_path / "zk")]
    assert main(args) == 0
    first = (tmp_path / "zk/zk.csv").read_text()
    assert main(args) == 0
    assert (tmp_path / "zk/zk.csv").read_text() == first


def test_cli_out_dir_config_collision(tmp_path):
    base = ["zk", "--n", "32", "--k", "3", "--trials", "2", "--out", str(tmp_path / "zk")]
    assert main(base + ["--seed", "5"]) == 0
    # different config into same directory is refused
    assert main(base + ["--seed", "6"]) == 1


def test_cli_greedy_uniformity_k_guard(tmp_path):
    rc = main(["greedy-uniformity", "--n", "64", "--k", "10", "--trials", "2",
               "--out", str(tmp_path / "gu")])
    assert rc == 1


def test_cli_sampling_summary_schema(tmp_path):
    rc = main([
        "glauber-sample", "--n", "12", "--k", "2", "--trials", "5", "--seed", "8",
        "--exact", "--coupled", "--out", str(tmp_path / "s"),
    ])
    assert rc == 0
    lines = (tmp_path / "s/sampling_summary.csv").read_text().strip().splitlines()
    assert lines[0].split(",") == [
        "n", "k", "trials", "success_rate", "coupled_agreement",
        "w2sq_stopped", "w2sq_extended",
    ]
    sidecar = json.loads((tmp_path / "s/sampling_summary.csv.json").read_text())
    assert sidecar["artifact_version"]
    assert "master_seed=8" in sidecar["config"]
