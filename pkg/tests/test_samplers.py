import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chi2

from hardcore.errors import BudgetExceededError
from hardcore.graphs import Graph, VertexSet, gen_gnp, is_independent
from hardcore.samplers import (
    GlauberParams,
    SamplerSpec,
    coupled_run,
    default_horizon,
    extend_uniform,
    glauber_run,
    greedy_run,
    load_batch,
    sample_batch,
    save_batch,
)
from hardcore.seeding import derive_seed

from conftest import vs


def chi_square_uniform(counts, total, categories):
    e = total / categories
    stat = sum((c - e) ** 2 / e for c in counts) + (categories - len(counts)) * e
    return float(chi2.sf(stat, categories - 1))


# ---------------------------------------------------------------------------
# glauber
# ---------------------------------------------------------------------------


def test_default_horizon_formula():
    assert default_horizon(4096, 6) == 100 * 64 * 12
    assert default_horizon(10, 2) == math.ceil(100 * 4 * math.log2(10))


def test_glauber_single_vertex_succeeds():
    g = Graph.empty(1)
    for i in range(200):
        rec = glauber_run(g, GlauberParams(1, 100), derive_seed(5, i))
        assert rec.success and rec.result.size == 1


def test_glauber_k3_target_two_always_fails(k3):
    for i in range(50):
        rec = glauber_run(k3, GlauberParams(2, 300), derive_seed(6, i))
        assert not rec.success
        assert rec.steps_used == 300


def test_glauber_outputs_are_independent_sets():
    for i in range(60):
        g = gen_gnp(14, 0.5, derive_seed(9, i))
        rec = glauber_run(g, GlauberParams(2, 2000), derive_seed(10, i))
        if rec.success:
            assert rec.result.size == 2
            assert is_independent(g, rec.result)


def test_glauber_zero_target():
    rec = glauber_run(Graph.empty(3), GlauberParams(0, 10), 1)
    assert rec.success and rec.result.size == 0 and rec.steps_used == 0


def test_glauber_deterministic_per_seed():
    g = gen_gnp(20, 0.5, 3)
    a = glauber_run(g, GlauberParams(3, 500), 77)
    b = glauber_run(g, GlauberParams(3, 500), 77)
    assert a == b


# ---------------------------------------------------------------------------
# greedy
# ---------------------------------------------------------------------------


def test_greedy_fills_empty_graph():
    rec = greedy_run(Graph.empty(5), 5, 1)
    assert rec.success and rec.result.bits == 0b11111
    assert len(rec.order) == 5


def test_greedy_path3_law(path3):
    # brute-force decision tree: success 2/3 on {0,2}, FAIL 1/3
    wins = fails = 0
    trials = 4000
    for i in range(trials):
        rec = greedy_run(path3, 2, derive_seed(21, i))
        if rec.success:
            assert rec.result.bits == 0b101
            wins += 1
        else:
            fails += 1
    assert wins / trials == pytest.approx(2 / 3, abs=0.03)
    assert fails / trials == pytest.approx(1 / 3, abs=0.03)


def test_greedy_k3_uniform_singletons(k3):
    counts = Counter()
    trials = 3000
    for i in range(trials):
        rec = greedy_run(k3, 1, derive_seed(22, i))
        counts[rec.result.bits] += 1
    assert chi_square_uniform(list(counts.values()), trials, 3) > 0.01


# ---------------------------------------------------------------------------
# coupled execution
# ---------------------------------------------------------------------------


def test_coupled_k3_both_fail(k3):
    gl, gr, agreed = coupled_run(k3, 2, 200, 7)
    assert not gl.success and not gr.success and agreed is False


def test_coupled_empty_graph_agreement_and_marginals():
    g = Graph.empty(4)
    trials = 4000
    agree = 0
    gl_counts = Counter()
    gr_counts = Counter()
    for i in range(trials):
        gl, gr, agreed = coupled_run(g, 2, 400, derive_seed(23, i))
        assert gl.success and gr.success
        agree += 1 if agreed else 0
        gl_counts[gl.result.bits] += 1
        gr_counts[gr.result.bits] += 1
    assert agree / trials >= 0.5
    # both marginals uniform over the six 2-sets
    assert chi_square_uniform(list(gl_counts.values()), trials, 6) > 0.01
    assert chi_square_uniform(list(gr_counts.values()), trials, 6) > 0.01


def test_coupled_outputs_valid():
    for i in range(40):
        g = gen_gnp(12, 0.5, derive_seed(24, i))
        gl, gr, agreed = coupled_run(g, 2, 1000, derive_seed(25, i))
        if gl.success:
            assert is_independent(g, gl.result) and gl.result.size == 2
        if agreed:
            assert gl.result.bits == gr.result.bits


# ---------------------------------------------------------------------------
# uniform extension
# ---------------------------------------------------------------------------


def test_extend_uniform_examples(k3, c5):
    assert extend_uniform(k3, vs(3, 0), 2, seed=1) is None
    got = extend_uniform(c5, vs(5, 0), 2, seed=1)
    assert got.members() in [(0, 2), (0, 3)]


def test_extend_uniform_is_uniform():
    g = Graph.empty(4)
    counts = Counter()
    trials = 3000
    for i in range(trials):
        got = extend_uniform(g, vs(4, 0), 2, derive_seed(26, i))
        counts[got.bits] += 1
    assert set(counts) == {0b0011, 0b0101, 0b1001}
    assert chi_square_uniform(list(counts.values()), trials, 3) > 0.01


def test_extend_uniform_c5_two_completions(c5):
    counts = Counter()
    trials = 2000
    for i in range(trials):
        got = extend_uniform(c5, vs(5, 0), 2, derive_seed(27, i))
        counts[got.members()] += 1
    assert set(counts) == {(0, 2), (0, 3)}
    assert chi_square_uniform(list(counts.values()), trials, 2) > 0.01


def test_extend_uniform_identity_and_contract(c5):
    assert extend_uniform(c5, vs(5, 0), 1, seed=1).bits == vs(5, 0).bits
    with pytest.raises(ValueError):
        extend_uniform(c5, vs(5, 0, 1), 2, seed=1)  # not independent
    with pytest.raises(ValueError):
        extend_uniform(c5, vs(5, 0, 2), 1, seed=1)  # target below size


def test_extend_uniform_budget():
    g = Graph.empty(40)
    with pytest.raises(BudgetExceededError):
        extend_uniform(g, VertexSet.empty(40), 8, seed=1, budget=1000)


# ---------------------------------------------------------------------------
# batches
# ---------------------------------------------------------------------------


def test_batch_empty():
    g = gen_gnp(8, 0.5, 1)
    batch = sample_batch(g, SamplerSpec("greedy", 2), 0, 9)
    assert batch.records == [] and batch.fail_rate() == 0.0


def test_batch_deterministic():
    g = gen_gnp(10, 0.5, 1)
    spec = SamplerSpec("glauber", 2, 400)
    a = sample_batch(g, spec, 20, master_seed=5)
    b = sample_batch(g, spec, 20, master_seed=5)
    assert a.records == b.records


def test_batch_masters_differ():
    g = gen_gnp(10, 0.5, 1)
    spec = SamplerSpec("greedy", 2)
    a = sample_batch(g, spec, 50, master_seed=5)
    b = sample_batch(g, spec, 50, master_seed=6)
    assert [r.result.bits for r in a.records if r.success] != [
        r.result.bits for r in b.records if r.success
    ]


def test_batch_parallelism_invariance():
    g = gen_gnp(10, 0.5, 1)
    spec = SamplerSpec("glauber", 2, 400)
    serial = sample_batch(g, spec, 12, master_seed=5, parallelism=1)
    parallel = sample_batch(g, spec, 12, master_seed=5, parallelism=2)
    assert serial.records == parallel.records


def test_batch_round_trip(tmp_path):
    g = gen_gnp(10, 0.5, 1)
    batch = sample_batch(g, SamplerSpec("greedy", 2), 10, master_seed=5)
    save_batch(batch, tmp_path / "b.csv")
    rows, sidecar = load_batch(tmp_path / "b.csv", g.n)
    assert len(rows) == 10
    assert sidecar["graph_hash"] == g.graph_hash()
    assert sidecar["spec"]["kind"] == "greedy"
    for trial, seed, outcome, steps, bits_hex in rows:
        rec = batch.records[trial]
        assert (outcome == "SUCCESS") == rec.success
        if rec.success:
            assert VertexSet.from_hex(g.n, bits_hex).bits == rec.result.bits
