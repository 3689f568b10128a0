import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardcore.errors import BudgetExceededError
from hardcore.graphs import (
    Graph,
    NoiseParams,
    VertexSet,
    d_j,
    ell_up_degree,
    expected_zk,
    expected_zk_log2,
    gen_gnp,
    induced_subgraph,
    is_independent,
    load_graph,
    max_independent_set_size,
    resample_noise,
    save_graph,
    up_degree,
)
from hardcore.seeding import derive_seed

from conftest import brute_mis_size, vs


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def test_gnp_p0_is_empty():
    g = gen_gnp(3, 0.0, seed=1)
    assert g.edge_count() == 0


def test_gnp_p1_is_complete():
    g = gen_gnp(3, 1.0, seed=1)
    assert g.edge_count() == 3


def test_gnp_edge_count_within_4_sigma():
    # binomial oracle: C(1000,2) pairs at p=1/2
    g = gen_gnp(1000, 0.5, seed=7)
    pairs = 1000 * 999 // 2
    sigma = math.sqrt(pairs * 0.25)
    assert abs(g.edge_count() - pairs / 2) <= 4 * sigma


def test_gnp_deterministic_per_seed():
    a = gen_gnp(40, 0.5, seed=5)
    b = gen_gnp(40, 0.5, seed=5)
    c = gen_gnp(40, 0.5, seed=6)
    assert a.rows == b.rows
    assert a.rows != c.rows


def test_gnp_adjacency_well_formed():
    g = gen_gnp(50, 0.3, seed=2)
    g.validate()


# ---------------------------------------------------------------------------
# noise operator
# ---------------------------------------------------------------------------


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_noise_s0_is_identity(graph_seed, noise_seed):
    g = gen_gnp(15, 0.5, graph_seed)
    gp = resample_noise(g, NoiseParams(0.0), noise_seed)
    assert gp.rows == g.rows


def test_noise_s1_ignores_input():
    # full resample: output depends only on the seed, not on g
    a = resample_noise(Graph.complete(30), NoiseParams(1.0), 99)
    b = resample_noise(Graph.empty(30), NoiseParams(1.0), 99)
    assert a.rows == b.rows


def test_noise_retention_rate_on_triangle():
    # per-edge flip probability s/2 at p=1/2: retention 0.75 +- 0.02
    k3 = Graph.complete(3)
    trials = 10_000
    kept = 0
    for i in range(trials):
        gp = resample_noise(k3, NoiseParams(0.5), derive_seed(1234, i))
        kept += sum(1 for u, w in [(0, 1), (0, 2), (1, 2)] if gp.edge(u, w))
    assert abs(kept / (3 * trials) - 0.75) < 0.02


def test_noise_crn_mode_nests_selections():
    # same pair uniforms across s: edges resampled at s=0.2 are a subset of
    # those resampled at s=0.7
    g = Graph.complete(20)
    lo = resample_noise(g, NoiseParams(0.2, 0.999999), 5, common_random_numbers=True)
    hi = resample_noise(g, NoiseParams(0.7, 0.999999), 5, common_random_numbers=True)
    # with p ~ 1 fresh edges stay present, so removals identify selections
    removed_lo = {e for e in g.edges() if not lo.edge(*e)}
    removed_hi = {e for e in g.edges() if not hi.edge(*e)}
    assert removed_lo <= removed_hi


def test_noise_default_mode_salts_by_s():
    g = Graph.complete(20)
    lo = resample_noise(g, NoiseParams(0.2, 0.000001), 5)
    hi = resample_noise(g, NoiseParams(0.7, 0.000001), 5)
    removed_lo = {e for e in g.edges() if not lo.edge(*e)}
    removed_hi = {e for e in g.edges() if not hi.edge(*e)}
    assert not removed_lo <= removed_hi  # independent selections with overwhelming prob


# ---------------------------------------------------------------------------
# independence and degrees
# ---------------------------------------------------------------------------


def test_is_independent_examples(k3, path3):
    assert not is_independent(k3, vs(3, 0, 1))
    assert is_independent(k3, VertexSet.empty(3))
    assert is_independent(path3, vs(3, 0, 2))


def test_up_degree_examples(k3, path3, empty5):
    assert up_degree(empty5, VertexSet.empty(5)) == 5
    assert up_degree(k3, vs(3, 0)) == 0
    assert up_degree(path3, vs(3, 0)) == 1  # only the far endpoint


def test_up_degree_rejects_dependent_set(k3):
    with pytest.raises(ValueError):
        up_degree(k3, vs(3, 0, 1))


def test_ell_up_degree_examples(path4):
    assert ell_up_degree(Graph.empty(4), VertexSet.empty(4), 2) == 6
    assert ell_up_degree(path4, VertexSet.empty(4), 2) == 3  # {0,2},{0,3},{1,3}
    assert ell_up_degree(path4, VertexSet.empty(4), 0) == 1


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_ell_up_degree_consistency(seed):
    g = gen_gnp(12, 0.5, seed)
    s = VertexSet.empty(12)
    # pick a random independent set greedily from the seed
    rem = list(range(12))
    rng = np.random.default_rng(seed)
    rng.shuffle(rem)
    for v in rem[:4]:
        cand = s.add(v)
        if is_independent(g, cand):
            s = cand
    assert ell_up_degree(g, s, 1) == up_degree(g, s)
    for ell in range(4):
        assert ell_up_degree(g, s, ell) <= math.comb(up_degree(g, s), ell)


# ---------------------------------------------------------------------------
# induced subgraphs and exact MIS
# ---------------------------------------------------------------------------


def test_induced_subgraph_examples(k3, path3):
    sub = induced_subgraph(k3, vs(3, 1, 2))
    assert sub.n == 2 and sub.edge_count() == 1
    sub = induced_subgraph(k3, VertexSet.empty(3))
    assert sub.n == 0
    sub = induced_subgraph(path3, vs(3, 0, 2))
    assert sub.n == 2 and sub.edge_count() == 0


def test_mis_examples(k3, empty5):
    assert max_independent_set_size(k3) == 1
    assert max_independent_set_size(Graph.empty(7)) == 7
    assert max_independent_set_size(Graph.cycle(5)) == 2


def test_mis_rejects_over_cap():
    with pytest.raises(ValueError):
        max_independent_set_size(Graph.empty(65))


def test_mis_agrees_with_subset_enumeration():
    # randomized: >= 200 graphs up to 16 vertices against the brute oracle
    rng = np.random.default_rng(42)
    for trial in range(200):
        n = int(rng.integers(1, 17))
        p = float(rng.random())
        g = gen_gnp(n, p, derive_seed(42, trial))
        assert max_independent_set_size(g) == brute_mis_size(g)


# ---------------------------------------------------------------------------
# counting formulas
# ---------------------------------------------------------------------------


def test_expected_zk_examples():
    assert expected_zk(4, 2) == pytest.approx(3.0)
    assert expected_zk(17, 0) == 1.0
    assert expected_zk(4, 2, exact=True) == Fraction(3)


def test_expected_zk_log2_matches_big_rational():
    exact = expected_zk(100, 10, exact=True)
    log2_exact = math.log2(exact.numerator) - math.log2(exact.denominator)
    assert expected_zk_log2(100, 10) == pytest.approx(log2_exact, rel=1e-9)


def test_d_j_examples():
    assert d_j(10, 0) == 10.0
    assert d_j(10, 3) == pytest.approx(7 / 8)
    assert d_j(10, 10) == 0.0


# ---------------------------------------------------------------------------
# vertex sets and file round-trip
# ---------------------------------------------------------------------------


@given(st.integers(1, 40), st.data())
@settings(max_examples=40, deadline=None)
def test_vertex_set_invariants(n, data):
    bits = data.draw(st.integers(0, (1 << n) - 1))
    s = VertexSet(n, bits)
    assert s.size == bits.bit_count() == len(s.members())
    # squared indicator norm equals the cardinality
    assert sum(1 for _ in s.members()) == s.size
    assert VertexSet.from_hex(n, s.to_hex()).bits == bits


def test_graph_file_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    for trial in range(25):
        n = int(rng.integers(2, 21))
        g = gen_gnp(n, 0.4, derive_seed(11, trial))
        path = tmp_path / f"g{trial}.hcg"
        save_graph(g, path)
        g2 = load_graph(path)
        assert g2.n == g.n and g2.rows == g.rows
        # byte-exact round trip of the file itself
        save_graph(g2, str(path) + ".again")
        assert open(path).read() == open(str(path) + ".again").read()


def test_load_rejects_bad_header(tmp_path):
    bad = tmp_path / "bad.hcg"
    bad.write_text("nope v9 3\n0 1\n")
    with pytest.raises(ValueError):
        load_graph(bad)


def test_gen_budget_exceeded():
    with pytest.raises(BudgetExceededError):
        gen_gnp(1 << 15, 0.5, 1)
