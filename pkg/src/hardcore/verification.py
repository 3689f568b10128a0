"""Named oracle/property checks behind ``hardcore verify``.

Each check is a pure function of a seed returning a CheckResult; the registry
drives both the CLI verdict JSON and the acceptance tests.  Exact checks carry
zero tolerance; Monte Carlo checks state their statistical criterion in the
details string.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import chi2

from .graphs import (
    Graph,
    NoiseParams,
    VertexSet,
    expected_zk,
    gen_gnp,
    resample_noise,
)
from .measures import (
    ExactMeasure,
    condition_on_size,
    hardcore_measure,
    k_star,
    m2_squared,
    mixture,
    tv_distance,
)
from .oracles import (
    brute_force_min_coupling,
    check_config_bound,
    check_edge_bound,
    check_vertex_overlap,
    degree_weighted_left_measure,
    detailed_balance_witness,
    exact_glauber_kernel,
    exact_greedy_law,
    exact_stopped_glauber,
    extension_walk,
    time_reversal,
)
from .samplers import GlauberParams, coupled_run, glauber_run, greedy_run
from .seeding import derive_seed, make_rng
from .transport import (
    chaos_lower_bound,
    exact_min_cost_transport,
    min_disagreement_coupling,
    survival_probability,
    w2_exact,
)
from .zkfast import count_k_independent_sets

__all__ = ["CheckResult", "run_checks", "CHECKS", "check_names"]

CHI2_LEVEL = 0.01  # agreement tests reject below this significance


@dataclass
class CheckResult:
    check_name: str
    verdict: bool
    details: str
    seconds: float = 0.0
    counterexample: dict | None = None
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "check_name": self.check_name,
            "parameters": self.parameters,
            "verdict": self.verdict,
            "details": self.details,
            "seconds": round(self.seconds, 3),
        }
        if self.counterexample is not None:
            payload["counterexample"] = self.counterexample
        return json.dumps(payload, sort_keys=True)


def _seeded_graphs(seed: int, count: int, n_lo: int, n_hi: int):
    """Deterministic family of G(n,1/2) instances with n cycling in [n_lo,n_hi]."""
    out = []
    for i in range(count):
        n = n_lo + (i % (n_hi - n_lo + 1))
        out.append(gen_gnp(n, 0.5, derive_seed(seed, 7001, i)))
    return out


# ---------------------------------------------------------------------------
# exact stationarity / reversal checks
# ---------------------------------------------------------------------------


def chk_detailed_balance(seed: int, quick: bool = False) -> CheckResult:
    graphs = _seeded_graphs(seed, 10 if quick else 20, 2, 8)
    for g in graphs:
        op, mu = exact_glauber_kernel(g)
        wit = detailed_balance_witness(op, mu.probs)
        if wit is not None:
            x, y, lhs, rhs = wit
            return CheckResult(
                "detailed_balance",
                False,
                f"violated on {g!r}",
                counterexample={
                    "x": x.to_hex(),
                    "y": y.to_hex(),
                    "mu_x_Pxy": str(lhs),
                    "mu_y_Pyx": str(rhs),
                },
            )
    return CheckResult(
        "detailed_balance",
        True,
        f"exact detailed balance on {len(graphs)} seeded graphs (n<=8), zero tolerance",
    )


def chk_time_reversal(seed: int, quick: bool = False) -> CheckResult:
    # unstopped kernels
    for g in _seeded_graphs(seed, 5 if quick else 10, 2, 8):
        op, mu = exact_glauber_kernel(g)
        rev = time_reversal(op, mu.probs)
        back = rev.apply_left(op.apply_left(mu.probs))
        if list(back) != list(mu.probs):
            return CheckResult("time_reversal", False, f"mu P P' != mu on {g!r}")
        for i in range(len(op.row_states)):
            for j in range(len(op.col_states)):
                if op.matrix[i][j] == 0 and rev.matrix[j][i] != 0:
                    return CheckResult(
                        "time_reversal", False, "zero pattern not inherited"
                    )
    # extension walks
    cases = [(8, 1, 2), (8, 2, 3), (10, 1, 2)] if quick else [
        (8, 1, 2), (8, 2, 3), (10, 1, 2), (10, 2, 3), (12, 2, 4), (9, 1, 3),
    ]
    for idx, (n, km, k) in enumerate(cases):
        g = gen_gnp(n, 0.5, derive_seed(seed, 7100, idx))
        walk = extension_walk(g, km, k)
        mu = list(walk.left_law)
        back = walk.P_prime.apply_left(walk.P.apply_left(mu))
        if list(back) != mu:
            return CheckResult(
                "time_reversal", False, f"walk reversal broke on n={n},k-={km},k={k}"
            )
        for i in range(len(walk.P.row_states)):
            for j in range(len(walk.P.col_states)):
                if walk.P.matrix[i][j] == 0 and walk.P_prime.matrix[j][i] != 0:
                    return CheckResult(
                        "time_reversal", False, "walk zero pattern not inherited"
                    )
    return CheckResult(
        "time_reversal",
        True,
        "mu P P' = mu exactly (kernels and extension walks), zero pattern inherited",
    )


def chk_extension_pushforward(seed: int, quick: bool = False) -> CheckResult:
    cases = [(8, 1, 2), (9, 2, 3)] if quick else [(8, 1, 2), (9, 2, 3), (10, 1, 2), (12, 2, 3)]
    for idx, (n, km, k) in enumerate(cases):
        g = gen_gnp(n, 0.5, derive_seed(seed, 7200, idx))
        walk = extension_walk(g, km, k)
        deg_mu = degree_weighted_left_measure(walk)
        push = walk.P.apply_left(deg_mu)
        want = Fraction(1, len(walk.right_states))
        if any(p != want for p in push):
            return CheckResult(
                "extension_pushforward",
                False,
                f"pushforward not uniform on n={n},k-={km},k={k}",
            )
    return CheckResult(
        "extension_pushforward",
        True,
        "degree-weighted left measure pushes to exactly uniform on the k-level",
    )


def chk_greedy_exchangeability(seed: int, quick: bool = False) -> CheckResult:
    rng = make_rng(derive_seed(seed, 7300))
    trials = 5 if quick else 12
    for i in range(trials):
        n = int(rng.integers(4, 8))
        g = gen_gnp(n, 0.5, derive_seed(seed, 7301, i))
        s = int(rng.integers(1, 4))
        perm = [int(x) for x in rng.permutation(n)]
        law = exact_greedy_law(g, s)
        law_p = exact_greedy_law(g.relabel(perm), s)
        mapped = {}
        for vs, p in zip(law.success_states, law.success_probs):
            bits = 0
            for v in vs.members():
                bits |= 1 << perm[v]
            mapped[bits] = p
        got = {vs.bits: p for vs, p in zip(law_p.success_states, law_p.success_probs)}
        if mapped != got or law.fail_prob != law_p.fail_prob:
            return CheckResult(
                "greedy_exchangeability", False, f"relabeling changed the law (n={n}, s={s})"
            )
    return CheckResult(
        "greedy_exchangeability",
        True,
        f"greedy output law exactly relabeling-equivariant on {trials} random cases",
    )


# ---------------------------------------------------------------------------
# sampler/oracle agreement (chi-square)
# ---------------------------------------------------------------------------


def _chi_square_outcomes(observed: dict, expected: dict, trials: int):
    """Pearson statistic with cells pooled so every expected count >= 5."""
    cells = []
    pooled_obs = 0.0
    pooled_exp = 0.0
    for key, prob in expected.items():
        e = float(prob) * trials
        o = observed.get(key, 0)
        if e < 5.0:
            pooled_obs += o
            pooled_exp += e
        else:
            cells.append((o, e))
    if pooled_exp > 0:
        cells.append((pooled_obs, pooled_exp))
    stat = sum((o - e) ** 2 / e for o, e in cells if e > 0)
    dof = max(len(cells) - 1, 1)
    return stat, dof, float(chi2.sf(stat, dof))


def _empirical_outcomes(records) -> dict:
    out: dict = {}
    for rec in records:
        key = rec.result.bits if rec.success else "FAIL"
        out[key] = out.get(key, 0) + 1
    return out


def chk_sampler_agreement(seed: int, quick: bool = False) -> CheckResult:
    trials = 20_000 if quick else 100_000
    scenarios = [
        (gen_gnp(6, 0.5, derive_seed(seed, 7401)), 2, 40),
        (gen_gnp(8, 0.5, derive_seed(seed, 7402)), 2, 60),
    ]
    pvals = []
    for g, s, horizon in scenarios:
        stopped = exact_stopped_glauber(g, s, horizon)
        expected_gl = stopped.outcome_dict()
        greedy_law = exact_greedy_law(g, s)
        expected_gr = greedy_law.outcome_dict()

        gl_obs: dict = {}
        gr_obs: dict = {}
        cpl_gl_obs: dict = {}
        cpl_gr_obs: dict = {}
        params = GlauberParams(s, horizon)
        for i in range(trials):
            rec = glauber_run(g, params, derive_seed(seed, 7410, i))
            key = rec.result.bits if rec.success else "FAIL"
            gl_obs[key] = gl_obs.get(key, 0) + 1
            rec = greedy_run(g, s, derive_seed(seed, 7411, i))
            key = rec.result.bits if rec.success else "FAIL"
            gr_obs[key] = gr_obs.get(key, 0) + 1
            a, b, _ = coupled_run(g, s, horizon, derive_seed(seed, 7412, i))
            key = a.result.bits if a.success else "FAIL"
            cpl_gl_obs[key] = cpl_gl_obs.get(key, 0) + 1
            key = b.result.bits if b.success else "FAIL"
            cpl_gr_obs[key] = cpl_gr_obs.get(key, 0) + 1

        for name, obs, exp in [
            ("glauber", gl_obs, expected_gl),
            ("greedy", gr_obs, expected_gr),
            ("coupled-glauber", cpl_gl_obs, expected_gl),
            ("coupled-greedy", cpl_gr_obs, expected_gr),
        ]:
            stat, dof, p = _chi_square_outcomes(obs, exp, trials)
            pvals.append((name, g.n, p))
            if p < CHI2_LEVEL:
                return CheckResult(
                    "sampler_agreement",
                    False,
                    f"{name} law rejected on n={g.n}: chi2 p={p:.5f} < {CHI2_LEVEL}",
                    counterexample={"scenario": name, "n": g.n, "p_value": p},
                )
    detail = "; ".join(f"{nm}(n={n}): p={p:.3f}" for nm, n, p in pvals)
    return CheckResult(
        "sampler_agreement",
        True,
        f"chi-square at {CHI2_LEVEL} level over {trials} trials: {detail}",
    )


# ---------------------------------------------------------------------------
# transport checks
# ---------------------------------------------------------------------------


def _random_exact_measure(rng, n: int, max_atoms: int) -> ExactMeasure:
    atoms = int(rng.integers(1, min(max_atoms, 1 << n) + 1))
    bits = rng.choice(1 << n, size=atoms, replace=False)
    weights = [int(w) for w in rng.integers(1, 20, size=atoms)]
    total = sum(weights)
    return ExactMeasure(
        [VertexSet(n, int(b)) for b in bits],
        [Fraction(w, total) for w in weights],
    )


def _nonempty_random_measure(rng, n: int, max_atoms: int) -> ExactMeasure:
    while True:
        mu = _random_exact_measure(rng, n, max_atoms)
        if m2_squared(mu) > 0:
            return mu


def chk_w2_correctness(seed: int, quick: bool = False) -> CheckResult:
    rng = make_rng(derive_seed(seed, 7500))
    # identity and disjoint point masses
    mu = hardcore_measure(gen_gnp(6, 0.5, derive_seed(seed, 7501)))
    v, _ = w2_exact(mu, mu)
    if v > 1e-9:
        return CheckResult("w2_correctness", False, f"self-distance {v} != 0")
    pa = ExactMeasure([VertexSet.from_iter(2, [0])], [Fraction(1)])
    pb = ExactMeasure([VertexSet.from_iter(2, [1])], [Fraction(1)])
    v, _ = w2_exact(pa, pb, exact=True)
    if abs(v - math.sqrt(2)) > 1e-12:
        return CheckResult("w2_correctness", False, f"disjoint unit masses gave {v}")
    # triangle inequality + expansion bound on random triples
    triples = 25 if quick else 100
    for i in range(triples):
        n = int(rng.integers(2, 6))
        a = _nonempty_random_measure(rng, n, 6)
        b = _nonempty_random_measure(rng, n, 6)
        c = _nonempty_random_measure(rng, n, 6)
        vab, _ = w2_exact(a, b)
        vbc, _ = w2_exact(b, c)
        vac, _ = w2_exact(a, c)
        if vac > vab + vbc + 1e-9:
            return CheckResult(
                "w2_correctness",
                False,
                f"triangle inequality violated: {vac} > {vab}+{vbc}",
            )
        if vab**2 > 2 + 1e-9:
            return CheckResult("w2_correctness", False, f"expansion bound broken: {vab**2}")
    # exact solver vs brute-force vertex enumeration on <=4x4 supports
    brutes = 10 if quick else 30
    for i in range(brutes):
        n = int(rng.integers(2, 5))
        a = _nonempty_random_measure(rng, n, 4)
        b = _nonempty_random_measure(rng, n, 4)
        cost = [[-x.overlap(y) for y in b.support] for x in a.support]
        q_net, _ = exact_min_cost_transport(list(a.probs), list(b.probs), cost)
        q_brute = brute_force_min_coupling(list(a.probs), list(b.probs), cost)
        if q_net != q_brute:
            return CheckResult(
                "w2_correctness",
                False,
                f"network solver {q_net} != brute force {q_brute}",
                counterexample={"overlap_net": str(q_net), "overlap_brute": str(q_brute)},
            )
    return CheckResult(
        "w2_correctness",
        True,
        f"identities, triangle on {triples} triples (1e-9 slack), brute-force match on {brutes} instances",
    )


def chk_tv_coupling_identity(seed: int, quick: bool = False) -> CheckResult:
    rng = make_rng(derive_seed(seed, 7600))
    cases = 10 if quick else 30
    for i in range(cases):
        n = int(rng.integers(2, 5))
        a = _random_exact_measure(rng, n, 12)
        b = _random_exact_measure(rng, n, 12)
        tv = tv_distance(a, b)
        mdc = min_disagreement_coupling(a, b)
        if tv != mdc:
            return CheckResult(
                "tv_coupling_identity",
                False,
                f"tv {tv} != optimal 0/1 transport {mdc}",
            )
    return CheckResult(
        "tv_coupling_identity",
        True,
        f"tv equals minimal coupling disagreement exactly on {cases} random pairs (supports <= 12)",
    )


def chk_chaos_validity(seed: int, quick: bool = False) -> CheckResult:
    n = 10
    seeds = 3 if quick else 7
    worst = -1.0
    for s_noise in (0.25, 0.5, 1.0):
        for i in range(seeds):
            g = gen_gnp(n, 0.5, derive_seed(seed, 7700, i))
            gp = resample_noise(g, NoiseParams(s_noise), derive_seed(seed, 7701, i))
            cert = chaos_lower_bound(g, gp, None, 0, None, exact=True, noise_s=s_noise)
            v, _ = w2_exact(hardcore_measure(g), hardcore_measure(gp))
            gap = cert.w2sq_lower - v * v
            worst = max(worst, gap)
            if gap > 1e-9:
                return CheckResult(
                    "chaos_validity",
                    False,
                    f"certificate {cert.w2sq_lower} exceeds exact {v*v} at s={s_noise}",
                )
    # zero noise gives a certificate of exactly zero
    g = gen_gnp(n, 0.5, derive_seed(seed, 7702))
    cert = chaos_lower_bound(g, g, None, 0, None, exact=True, noise_s=0.0)
    if abs(cert.w2sq_lower) > 1e-12:
        return CheckResult("chaos_validity", False, f"s=0 certificate {cert.w2sq_lower} != 0")
    return CheckResult(
        "chaos_validity",
        True,
        f"certificate <= exact W2^2 + 1e-9 on {3*seeds} exact pairs (worst gap {worst:.2e}); zero at s=0",
    )


# ---------------------------------------------------------------------------
# generator / noise / counting checks
# ---------------------------------------------------------------------------


def chk_gnp_edge_concentration(seed: int, quick: bool = False) -> CheckResult:
    n = 1000
    g = gen_gnp(n, 0.5, derive_seed(seed, 7800))
    pairs = n * (n - 1) // 2
    mean = pairs / 2
    sd = math.sqrt(pairs * 0.25)
    dev = abs(g.edge_count() - mean) / sd
    ok = dev <= 4.0
    return CheckResult(
        "gnp_edge_concentration",
        ok,
        f"edge count {g.edge_count()} is {dev:.2f} sigma from {mean:.0f} (limit 4)",
    )


def chk_noise_flip_rate(seed: int, quick: bool = False) -> CheckResult:
    # s=0 identity for every seed
    g = gen_gnp(12, 0.5, derive_seed(seed, 7900))
    for i in range(5):
        if resample_noise(g, NoiseParams(0.0), derive_seed(seed, 7901, i)).rows != g.rows:
            return CheckResult("noise_flip_rate", False, "s=0 is not the identity")
    # per-edge retention 1 - s/2 at p=1/2 on the triangle
    trials = 2_000 if quick else 10_000
    k3 = Graph.complete(3)
    kept = 0
    for i in range(trials):
        gp = resample_noise(k3, NoiseParams(0.5), derive_seed(seed, 7902, i))
        kept += sum(1 for u, v in [(0, 1), (0, 2), (1, 2)] if gp.edge(u, v))
    freq = kept / (3 * trials)
    if abs(freq - 0.75) > 0.02:
        return CheckResult(
            "noise_flip_rate", False, f"edge retention {freq:.4f} not within 0.75 +- 0.02"
        )
    # s=1 resample is a fresh G(n,p) draw regardless of g: edge-count z-test
    n = 60
    pairs = n * (n - 1) // 2
    counts = []
    full = Graph.complete(n)
    reps = 40 if quick else 200
    for i in range(reps):
        counts.append(
            resample_noise(full, NoiseParams(1.0), derive_seed(seed, 7903, i)).edge_count()
        )
    z = (np.mean(counts) - pairs / 2) / (math.sqrt(pairs * 0.25 / len(counts)))
    if abs(z) > 4.0:
        return CheckResult(
            "noise_flip_rate", False, f"s=1 edge-count z={z:.2f} off a fresh draw"
        )
    return CheckResult(
        "noise_flip_rate",
        True,
        f"s=0 identity; retention {freq:.4f} in 0.75 +- 0.02 over {trials} draws; s=1 fresh (z={z:.2f})",
    )


def chk_zk_unbiasedness(seed: int, quick: bool = False) -> CheckResult:
    cases = [(30, 3), (30, 4), (60, 5)]
    n_seeds = 150 if quick else 500
    msgs = []
    for n, k in cases:
        vals = [
            count_k_independent_sets(gen_gnp(n, 0.5, derive_seed(seed, 8000, n, k, i)), k)
            for i in range(n_seeds)
        ]
        arr = np.asarray(vals, dtype=float)
        want = float(expected_zk(n, k, exact=True))
        se = arr.std(ddof=1) / math.sqrt(n_seeds)
        z = (arr.mean() - want) / se
        msgs.append(f"(n={n},k={k}): z={z:.2f}")
        if abs(z) > 5.0:
            return CheckResult(
                "zk_unbiasedness",
                False,
                f"empirical mean of Z_{k} at n={n} is {z:.2f} SE from M_k (limit 5)",
            )
    return CheckResult(
        "zk_unbiasedness", True, f"means within 5 SE over {n_seeds} seeds: " + "; ".join(msgs)
    )


def chk_window_identity(seed: int, quick: bool = False) -> CheckResult:
    for i in range(3 if quick else 8):
        g = gen_gnp(8, 0.5, derive_seed(seed, 8100, i))
        mu = hardcore_measure(g)
        sizes = mu.size_marginal()
        ks = k_star(g.n)
        lo, hi = max(0, ks - 1), ks + 1
        window_mass = sum(p for k, p in sizes.items() if lo <= k <= hi)
        if window_mass == 0:
            continue
        comps = []
        for k in range(lo, hi + 1):
            if sizes.get(k, 0) != 0:
                comps.append((sizes[k] / window_mass, condition_on_size(mu, k, k)))
        rebuilt = mixture(comps)
        direct = condition_on_size(mu, lo, hi)
        if tv_distance(rebuilt, direct) != 0:
            return CheckResult(
                "window_identity", False, f"mixture reconstruction failed on seed {i}"
            )
    return CheckResult(
        "window_identity",
        True,
        "size-conditioned mixture with window weights exactly rebuilds the window restriction",
    )


def chk_survival_boundaries(seed: int, quick: bool = False) -> CheckResult:
    trials = 300 if quick else 2000
    # s=0 leaves every set surviving
    rep0 = survival_probability(16, 0.0, 50, derive_seed(seed, 8200))
    if rep0.estimate != 1.0:
        return CheckResult("survival_boundaries", False, "s=0 must survive always")
    # k=4: threshold equals k, so survival is exactly the no-edge event and the
    # single-term union bound is tight
    rep = survival_probability(4, 0.6, trials, derive_seed(seed, 8201))
    exact = (1 - 0.3) ** 6
    se = math.sqrt(exact * (1 - exact) / trials)
    if abs(rep.estimate - exact) > 5 * se + 1e-9:
        return CheckResult(
            "survival_boundaries",
            False,
            f"k=4 estimate {rep.estimate:.4f} vs exact boundary value {exact:.4f}",
        )
    if abs(rep.union_bound_envelope - exact) > 1e-12:
        return CheckResult(
            "survival_boundaries", False, "k=4 envelope should equal the exact value"
        )
    # k=64 at s=1: estimate must sit below the (astronomically small) envelope
    rep64 = survival_probability(64, 1.0, 60 if quick else 200, derive_seed(seed, 8202))
    if not rep64.estimate <= rep64.union_bound_envelope + 1e-12:
        return CheckResult(
            "survival_boundaries", False, "k=64 estimate above the union-bound envelope"
        )
    return CheckResult(
        "survival_boundaries",
        True,
        f"s=0 always survives; k=4 boundary matches (1-s/2)^6 within 5 SE; k=64 estimate {rep64.estimate} <= envelope {rep64.union_bound_envelope:.2e}",
    )


def chk_combinatorial_lemmas(seed: int, quick: bool = False) -> CheckResult:
    m_hi = 5 if quick else 7
    reports = []
    for m in range(2, m_hi + 1):
        for ell in range(1, min(3, m) + 1):
            for d in range(1, 4):
                reports.append(check_vertex_overlap(m, ell, d))
                reports.append(check_edge_bound(m, ell, d))
                reports.append(check_config_bound(m, ell, d))
    bad = [r for r in reports if not r.verdict]
    if bad:
        r = bad[0]
        return CheckResult(
            "combinatorial_lemmas",
            False,
            f"{r.check_name} failed at {r.parameters}",
            counterexample=r.counterexample,
        )
    checked = sum(r.tuples_checked for r in reports)
    return CheckResult(
        "combinatorial_lemmas",
        True,
        f"{len(reports)} checker runs (m<={m_hi}, ell<=3, d<=3) all true; {checked} tuples enumerated",
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

CHECKS = [
    ("detailed_balance", chk_detailed_balance, True),
    ("time_reversal", chk_time_reversal, True),
    ("extension_pushforward", chk_extension_pushforward, True),
    ("greedy_exchangeability", chk_greedy_exchangeability, True),
    ("w2_correctness", chk_w2_correctness, True),
    ("tv_coupling_identity", chk_tv_coupling_identity, True),
    ("window_identity", chk_window_identity, True),
    ("gnp_edge_concentration", chk_gnp_edge_concentration, True),
    ("survival_boundaries", chk_survival_boundaries, True),
    ("combinatorial_lemmas", chk_combinatorial_lemmas, True),
    ("noise_flip_rate", chk_noise_flip_rate, False),
    ("chaos_validity", chk_chaos_validity, False),
    ("zk_unbiasedness", chk_zk_unbiasedness, False),
    ("sampler_agreement", chk_sampler_agreement, False),
]


def check_names() -> list[str]:
    return [name for name, _, _ in CHECKS]


def run_checks(seed: int, quick: bool = False, only: list[str] | None = None):
    """Run the registry; in quick mode only the quick-tagged checks run (at
    reduced sizes).  Returns a list of CheckResult."""
    results = []
    for name, fn, is_quick in CHECKS:
        if quick and not is_quick:
            continue
        if only and name not in only:
            continue
        t0 = time.time()
        try:
            res = fn(seed, quick=quick)
        except Exception as exc:  # surface crashes as failures with context
            res = CheckResult(name, False, f"crashed: {type(exc).__name__}: {exc}")
        res.seconds = time.time() - t0
        results.append(res)
    return results
