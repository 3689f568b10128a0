import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardcore.errors import BudgetExceededError, EmptyEventError
from hardcore.graphs import Graph, VertexSet, gen_gnp
from hardcore.measures import (
    ExactMeasure,
    WindowParams,
    condition_on_size,
    enumerate_independent_sets,
    hardcore_measure,
    k_star,
    m2,
    m2_squared,
    mixture,
    mk_ratio_check,
    round_half_up,
    save_measure,
    load_measure,
    tv_distance,
    zk_concentration_cutoff,
)
from hardcore.seeding import derive_seed
from hardcore.zkfast import (
    count_k_independent_sets,
    count_k_independent_sets_python,
    zk_counts,
)

from conftest import brute_independent_sets, vs


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def test_enumerate_k3(k3):
    profile, sets = enumerate_independent_sets(k3)
    assert profile.partition == 4
    assert {s.bits for s in sets} == {0, 1, 2, 4}


def test_enumerate_empty_graph_binomials():
    profile, _ = enumerate_independent_sets(Graph.empty(3))
    assert profile.zk == (1, 3, 3, 1)


def test_enumerate_c5_matches_brute_force(c5):
    profile, sets = enumerate_independent_sets(c5)
    brute = brute_independent_sets(c5)
    assert profile.partition == len(brute) == 11
    assert profile.zk == (1, 5, 5)
    assert {frozenset(s.members()) for s in sets} == set(brute)


def test_enumeration_budget_names_count(c5):
    with pytest.raises(BudgetExceededError) as exc:
        enumerate_independent_sets(c5, budget=3)
    assert exc.value.count == 4
    assert "4" in str(exc.value)


def test_enumerate_with_cap(c5):
    profile, sets = enumerate_independent_sets(c5, max_size=1)
    assert profile.zk == (1, 5)
    assert all(s.size <= 1 for s in sets)


# ---------------------------------------------------------------------------
# hardcore law
# ---------------------------------------------------------------------------


def test_hardcore_uniform_on_k3(k3):
    mu = hardcore_measure(k3)
    assert len(mu) == 4
    assert all(p == Fraction(1, 4) for p in mu.probs)


def test_hardcore_large_fugacity_concentrates(k3):
    mu = hardcore_measure(k3, 10**6)
    singleton_mass = sum(p for s, p in mu.items() if s.size == 1)
    assert singleton_mass >= Fraction(999, 1000)


def test_hardcore_c5_two_sets(c5):
    mu = hardcore_measure(c5)
    for s, p in mu.items():
        assert p == Fraction(1, 11)


def test_hardcore_float_fugacity(c5):
    mu = hardcore_measure(c5, 1.5)
    assert not mu.exact
    assert sum(mu.probs) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# conditioning, tv, m2
# ---------------------------------------------------------------------------


def test_condition_examples(k3, c5):
    mu = hardcore_measure(k3)
    singles = condition_on_size(mu, 1, 1)
    assert len(singles) == 3 and all(p == Fraction(1, 3) for p in singles.probs)
    assert tv_distance(condition_on_size(mu, 0, 3), mu) == 0
    two = condition_on_size(hardcore_measure(c5), 2, 2)
    assert len(two) == 5 and all(p == Fraction(1, 5) for p in two.probs)


def test_condition_empty_event(k3):
    with pytest.raises(EmptyEventError):
        condition_on_size(hardcore_measure(k3), 2, 3)


def test_tv_examples(k3):
    mu = hardcore_measure(k3)
    assert tv_distance(mu, mu) == 0
    a = ExactMeasure([VertexSet.empty(2)], [Fraction(1)])
    b = ExactMeasure([vs(2, 0)], [Fraction(1)])
    assert tv_distance(a, b) == 1
    half = ExactMeasure([VertexSet.empty(2), vs(2, 0)], [Fraction(1, 2), Fraction(1, 2)])
    assert tv_distance(half, a) == Fraction(1, 2)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_tv_is_a_metric_on_random_pairs(seed):
    rng = np.random.default_rng(seed)
    n = 3

    def rand_measure():
        atoms = rng.integers(1, 6)
        bits = rng.choice(8, size=atoms, replace=False)
        w = [int(x) for x in rng.integers(1, 9, size=atoms)]
        return ExactMeasure(
            [VertexSet(n, int(b)) for b in bits],
            [Fraction(x, sum(w)) for x in w],
        )

    a, b, c = rand_measure(), rand_measure(), rand_measure()
    assert 0 <= tv_distance(a, b) <= 1
    assert tv_distance(a, b) == tv_distance(b, a)
    assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c)


def test_m2_examples(c5):
    assert m2(ExactMeasure([VertexSet.empty(3)], [Fraction(1)])) == 0
    half = ExactMeasure([VertexSet.empty(2), vs(2, 0)], [Fraction(1, 2), Fraction(1, 2)])
    assert m2(half) == pytest.approx(math.sqrt(0.5))
    mu = hardcore_measure(c5)
    assert m2_squared(mu) == Fraction(15, 11)
    assert m2(mu) == pytest.approx(math.sqrt(15 / 11))


# ---------------------------------------------------------------------------
# expected-count ratios and window helpers
# ---------------------------------------------------------------------------


def test_mk_ratio_example():
    fwd, bwd = mk_ratio_check(16, 4)
    assert fwd == pytest.approx(12 / 80)
    assert bwd == pytest.approx(32 / 13)


def test_mk_ratio_rejects_k0():
    with pytest.raises(ValueError):
        mk_ratio_check(16, 0)


def test_mk_forward_ratio_obeys_decay_envelope_at_kstar():
    n = 1 << 20
    ks = k_star(n)
    fwd, _ = mk_ratio_check(n, ks)
    assert fwd <= 1.2  # K=0 envelope with the low-order factor


def test_round_half_up():
    assert round_half_up(1.5) == 2
    assert round_half_up(2.4) == 2
    assert round_half_up(-0.5) == 0


def test_k_star_values():
    assert k_star(1024) == 7  # 10 - log2(10) = 6.678 -> 7
    assert k_star(2000) == 8
    assert k_star(16) == 2


def test_window_params():
    w = WindowParams.for_n(1024, 2)
    assert (w.lo, w.hi) == (5, 9)
    with pytest.raises(ValueError):
        WindowParams(3, 5)


def test_cutoff_constants_exposed():
    n = 1024
    assert zk_concentration_cutoff(n) == pytest.approx(2 * 10 - 5 * math.log2(10))
    assert zk_concentration_cutoff(n, 2.0, 0.0) == pytest.approx(20.0)


# ---------------------------------------------------------------------------
# fast counting kernel vs references
# ---------------------------------------------------------------------------


def test_zk_counts_three_way_agreement():
    for trial in range(15):
        g = gen_gnp(18, 0.5, derive_seed(88, trial))
        profile, _ = enumerate_independent_sets(g)
        ks = zk_counts(g, len(profile.zk) - 1)
        assert tuple(ks) == profile.zk
        for k in range(len(ks)):
            assert count_k_independent_sets_python(g, k) == ks[k]


def test_zk_count_empty_and_complete():
    assert count_k_independent_sets(Graph.empty(6), 3) == 20
    assert count_k_independent_sets(Graph.complete(6), 2) == 0
    assert count_k_independent_sets(Graph.complete(6), 1) == 6


# ---------------------------------------------------------------------------
# mixture identity and serialization
# ---------------------------------------------------------------------------


def test_window_mixture_identity():
    g = gen_gnp(8, 0.5, 17)
    mu = hardcore_measure(g)
    sizes = mu.size_marginal()
    lo, hi = 1, 2
    mass = sum(p for k, p in sizes.items() if lo <= k <= hi)
    comps = [
        (sizes[k] / mass, condition_on_size(mu, k, k))
        for k in range(lo, hi + 1)
        if sizes.get(k)
    ]
    assert tv_distance(mixture(comps), condition_on_size(mu, lo, hi)) == 0


def test_measure_round_trip_exact(tmp_path, c5):
    mu = hardcore_measure(c5)
    save_measure(mu, tmp_path / "m.csv", graph_hash=c5.graph_hash())
    back, sidecar = load_measure(tmp_path / "m.csv")
    assert sidecar["graph_hash"] == c5.graph_hash()
    assert sidecar["n"] == 5
    assert tv_distance(mu, back) == 0
    assert back.exact


def test_measure_round_trip_float(tmp_path, c5):
    mu = hardcore_measure(c5, 1.5)
    save_measure(mu, tmp_path / "m.csv", graph_hash=c5.graph_hash(), lam=1.5)
    back, _ = load_measure(tmp_path / "m.csv")
    assert not back.exact
    assert float(tv_distance(mu, back)) < 1e-15
