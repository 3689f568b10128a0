"""Normalized 2-Wasserstein machinery.

Points are 0/1 indicator vectors of vertex sets; each measure is normalized by
its RMS norm m2 = sqrt(E|S|).  For such supports the squared cost decomposes as

    ||x/m2_l - y/m2_r||^2 = |X|/m2_l^2 + |Y|/m2_r^2 - 2|X∩Y|/(m2_l m2_r),

so minimizing transport cost is the same as maximizing expected overlap; the
exact rational solver exploits this to keep all pivoting arithmetic in
integers and Fractions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog
from scipy.sparse import csr_matrix

from .errors import (
    BudgetExceededError,
    DegenerateNormalizationError,
    HardcoreError,
    SamplerQualityError,
)
from .graphs import (
    Graph,
    NoiseParams,
    VertexSet,
    induced_subgraph,
    max_independent_set_size,
    resample_noise,
)
from .measures import ExactMeasure, hardcore_measure, m2_squared
from .samplers import SampleBatch, SamplerSpec, run_sampler
from .seeding import derive_seed, make_rng

__all__ = [
    "TransportPlan",
    "ChaosCertificate",
    "EmpiricalW2",
    "SurvivalReport",
    "w2_exact",
    "w2_empirical",
    "w2_upper_from_coupling",
    "mixture_upper_bound",
    "chaos_lower_bound",
    "survival_probability",
    "exact_min_cost_transport",
    "min_disagreement_coupling",
]

SUPPORT_BUDGET = 2048
_MARGINAL_TOL = 1e-10
_EXPANSION_TOL = 1e-9


def normalized_sq_cost(x: VertexSet, y: VertexSet, m2_left: float, m2_right: float) -> float:
    return (
        x.size / m2_left**2
        + y.size / m2_right**2
        - 2.0 * x.overlap(y) / (m2_left * m2_right)
    )


# ---------------------------------------------------------------------------
# exact min-cost transportation (successive shortest paths, Fractions)
# ---------------------------------------------------------------------------


def exact_min_cost_transport(
    supply: list[Fraction], demand: list[Fraction], cost: list[list]
) -> tuple[Fraction, list[list[Fraction]]]:
    """Optimal transportation plan between rational marginals with exact costs.

    Costs may be ints or Fractions (negative allowed).  Returns the optimal
    total cost and the plan matrix; marginals are met exactly.
    """
    m, l = len(supply), len(demand)
    total_supply = sum(supply)
    if total_supply != sum(demand):
        raise ValueError("supply and demand totals differ")
    src, snk = m + l, m + l + 1
    nnodes = m + l + 2

    to: list[int] = []
    cap: list[Fraction] = []
    cst: list[Fraction] = []
    adj: list[list[int]] = [[] for _ in range(nnodes)]

    def add_arc(u, v, c, w):
        adj[u].append(len(to))
        to.append(v)
        cap.append(Fraction(c))
        cst.append(Fraction(w))
        adj[v].append(len(to))
        to.append(u)
        cap.append(Fraction(0))
        cst.append(Fraction(-w))

    first_mid = {}
    for i in range(m):
        add_arc(src, i, supply[i], 0)
    for j in range(l):
        add_arc(m + j, snk, demand[j], 0)
    for i in range(m):
        for j in range(l):
            first_mid[(i, j)] = len(to)
            add_arc(i, m + j, total_supply, cost[i][j])

    pushed = Fraction(0)
    while pushed < total_supply:
        # Bellman-Ford (queue form) on the residual network
        dist: list[Fraction | None] = [None] * nnodes
        parent_arc = [-1] * nnodes
        dist[src] = Fraction(0)
        in_queue = [False] * nnodes
        queue = [src]
        in_queue[src] = True
        while queue:
            u = queue.pop(0)
            in_queue[u] = False
            du = dist[u]
            for e in adj[u]:
                if cap[e] > 0:
                    v = to[e]
                    nd = du + cst[e]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent_arc[v] = e
                        if not in_queue[v]:
                            queue.append(v)
                            in_queue[v] = True
        if dist[snk] is None:
            raise HardcoreError("transportation network admits no augmenting path")
        # bottleneck along the path
        bott = None
        v = snk
        while v != src:
            e = parent_arc[v]
            bott = cap[e] if bott is None else min(bott, cap[e])
            v = to[e ^ 1]
        v = snk
        while v != src:
            e = parent_arc[v]
            cap[e] -= bott
            cap[e ^ 1] += bott
            v = to[e ^ 1]
        pushed += bott

    plan = [[Fraction(0)] * l for _ in range(m)]
    total_cost = Fraction(0)
    for i in range(m):
        for j in range(l):
            e = first_mid[(i, j)]
            flow = cap[e ^ 1]  # reverse capacity equals shipped amount
            plan[i][j] = flow
            total_cost += flow * cst[e]
    return total_cost, plan


# ---------------------------------------------------------------------------
# transport plans
# ---------------------------------------------------------------------------


@dataclass
class TransportPlan:
    """Joint distribution over support pairs certifying a W2 upper bound.

    ``cost`` is the achieved normalized squared-distance objective and is
    recomputable from the plan and the stored normalizers.
    """

    left_support: tuple[VertexSet, ...]
    right_support: tuple[VertexSet, ...]
    left_probs: tuple
    right_probs: tuple
    plan: tuple[tuple, ...]
    m2_left: float
    m2_right: float
    cost: float
    exact: bool

    def __post_init__(self):
        resid = self.marginal_residual()
        tol = 0 if self.exact else _MARGINAL_TOL
        if resid > tol:
            raise HardcoreError(f"plan marginals off by {resid}")

    def marginal_residual(self):
        zero = Fraction(0) if self.exact else 0.0
        worst = zero
        for i, want in enumerate(self.left_probs):
            worst = max(worst, abs(sum(self.plan[i]) - want))
        for j, want in enumerate(self.right_probs):
            got = sum(row[j] for row in self.plan)
            worst = max(worst, abs(got - want))
        return worst

    def overlap_expectation(self) -> float:
        total = 0.0
        for i, x in enumerate(self.left_support):
            row = self.plan[i]
            for j, y in enumerate(self.right_support):
                if row[j]:
                    total += float(row[j]) * x.overlap(y)
        return total

    def recompute_cost(self) -> float:
        total = 0.0
        for i, x in enumerate(self.left_support):
            row = self.plan[i]
            for j, y in enumerate(self.right_support):
                if row[j]:
                    total += float(row[j]) * normalized_sq_cost(
                        x, y, self.m2_left, self.m2_right
                    )
        return total

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_left": self.left_support[0].n,
                "n_right": self.right_support[0].n,
                "left_support": [v.to_hex() for v in self.left_support],
                "right_support": [v.to_hex() for v in self.right_support],
                "left_probs": [str(p) for p in self.left_probs],
                "right_probs": [str(p) for p in self.right_probs],
                "plan": [[str(x) for x in row] for row in self.plan],
                "m2_left": self.m2_left,
                "m2_right": self.m2_right,
                "cost": self.cost,
                "exact": self.exact,
            },
            sort_keys=True,
        )


def _normalizers(mu: ExactMeasure, nu: ExactMeasure) -> tuple[float, float]:
    a = m2_squared(mu)
    b = m2_squared(nu)
    if a == 0 or b == 0:
        raise DegenerateNormalizationError(
            "m2 = 0: the normalized distance is undefined for a measure "
            "concentrated on the empty set"
        )
    return math.sqrt(float(a)), math.sqrt(float(b))


def w2_exact(
    mu: ExactMeasure, nu: ExactMeasure, exact: bool = False
) -> tuple[float, TransportPlan]:
    """Globally optimal normalized 2-Wasserstein distance and witness plan.

    Float mode solves the transportation LP; exact mode maximizes expected
    overlap with integer costs and rational pivoting, so the plan is exact.
    """
    if len(mu) > SUPPORT_BUDGET or len(nu) > SUPPORT_BUDGET:
        raise BudgetExceededError(
            f"transport support budget {SUPPORT_BUDGET} exceeded", max(len(mu), len(nu))
        )
    m2l, m2r = _normalizers(mu, nu)
    xs, ys = mu.support, nu.support
    if exact:
        if not (mu.exact and nu.exact):
            raise ValueError("exact solve requires exact measures")
        cost = [[-x.overlap(y) for y in ys] for x in xs]
        neg_overlap, plan = exact_min_cost_transport(
            list(mu.probs), list(nu.probs), cost
        )
        overlap = -neg_overlap
        w2sq = 2.0 - 2.0 * float(overlap) / (m2l * m2r)
        plan_t = tuple(tuple(row) for row in plan)
    else:
        k, l = len(xs), len(ys)
        c = np.empty((k, l))
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                c[i, j] = normalized_sq_cost(x, y, m2l, m2r)
        rows, cols, data = [], [], []
        for i in range(k):
            for j in range(l):
                rows.append(i)
                cols.append(i * l + j)
                data.append(1.0)
        for j in range(l):
            for i in range(k):
                rows.append(k + j)
                cols.append(i * l + j)
                data.append(1.0)
        a_eq = csr_matrix((data, (rows, cols)), shape=(k + l, k * l))
        b_eq = np.concatenate([np.asarray(mu.probs, float), np.asarray(nu.probs, float)])
        res = linprog(
            c.ravel(),
            A_eq=a_eq[:-1],
            b_eq=b_eq[:-1],
            bounds=(0, None),
            method="highs",
            options={"primal_feasibility_tolerance": 1e-10},
        )
        if res.status != 0:
            raise HardcoreError(f"transport LP failed: {res.message}")
        x = np.maximum(res.x.reshape(k, l), 0.0)
        w2sq = float((x * c).sum())
        plan_t = tuple(tuple(float(v) for v in row) for row in x)
    if w2sq > 2.0 + _EXPANSION_TOL:
        raise HardcoreError(
            f"solve violated the overlap expansion bound: w2^2 = {w2sq}"
        )
    plan_obj = TransportPlan(
        left_support=tuple(xs),
        right_support=tuple(ys),
        left_probs=tuple(mu.probs),
        right_probs=tuple(nu.probs),
        plan=plan_t,
        m2_left=m2l,
        m2_right=m2r,
        cost=w2sq,
        exact=exact,
    )
    return math.sqrt(max(w2sq, 0.0)), plan_obj


def min_disagreement_coupling(mu: ExactMeasure, nu: ExactMeasure):
    """Minimum P[X != Y] over couplings, solved exactly with 0/1 costs.

    Equals the total variation distance (coupling identity).
    """
    if not (mu.exact and nu.exact):
        raise ValueError("exact solve requires exact measures")
    support = sorted(
        {vs.bits for vs in mu.support} | {vs.bits for vs in nu.support}
    )
    n = mu.n
    a = mu.as_dict()
    b = nu.as_dict()
    left = [a.get(bits, Fraction(0)) for bits in support]
    right = [b.get(bits, Fraction(0)) for bits in support]
    cost = [
        [0 if i == j else 1 for j in range(len(support))] for i in range(len(support))
    ]
    value, _plan = exact_min_cost_transport(left, right, cost)
    return value


def w2_upper_from_coupling(plan: TransportPlan) -> float:
    """Cost of a supplied coupling: any explicit plan upper-bounds W2."""
    return math.sqrt(max(plan.recompute_cost(), 0.0))


def mixture_upper_bound(components: list[tuple[float, TransportPlan]]) -> float:
    """Weighted coupling bound for mixtures with matched weights.

    All component plans must be expressed in the same global normalizers.
    """
    if not components:
        raise ValueError("empty mixture")
    m2l = components[0][1].m2_left
    m2r = components[0][1].m2_right
    total = 0.0
    wsum = 0.0
    for w, plan in components:
        if abs(plan.m2_left - m2l) > 1e-12 or abs(plan.m2_right - m2r) > 1e-12:
            raise ValueError("component plans use different normalizers")
        total += float(w) * plan.recompute_cost()
        wsum += float(w)
    if abs(wsum - 1.0) > 1e-9:
        raise ValueError(f"mixture weights sum to {wsum}")
    return math.sqrt(max(total, 0.0))


# ---------------------------------------------------------------------------
# the disorder-chaos lower-bound certificate
# ---------------------------------------------------------------------------


@dataclass
class ChaosCertificate:
    """Monte Carlo (or exact) lower bound on W2(mu_G, mu_G')^2.

    Any coupling's expected overlap is at most E_{S~mu_G} alpha(G'[S]), since
    the common part of (S, S') is an independent set of both graphs; the
    certificate is 2 - 2*overlap_bound/(m2_left*m2_right).
    """

    n: int
    noise_s: float | None
    trials: int
    overlap_bound: float
    m2_left: float
    m2_right: float
    w2sq_lower: float
    stderr_overlap: float
    stderr_w2sq: float
    fail_rate_left: float
    fail_rate_right: float
    exact: bool
    seed: int | None

    def __post_init__(self):
        if self.overlap_bound < 0:
            raise ValueError("overlap bound must be nonnegative")
        if self.w2sq_lower > 2.0 + 1e-12:
            raise ValueError("certificate cannot exceed 2")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def chaos_lower_bound(
    g: Graph,
    g_prime: Graph,
    spec: SamplerSpec | None,
    trials: int,
    seed: int | None,
    exact: bool = False,
    noise_s: float | None = None,
    fail_threshold: float = 0.05,
    mis_cap: int = 64,
) -> ChaosCertificate:
    """Disorder-chaos certificate for the pair (g, g').

    Exact mode computes E_{S~mu_G}[alpha(g'[S])] and both normalizers from the
    exact hardcore measures (small graphs only).  Sampling mode draws S from
    ``spec`` on g and S' on g', estimates the overlap bound and m2 values, and
    aborts when either FAIL rate exceeds ``fail_threshold``.
    """
    if exact:
        mu = hardcore_measure(g)
        nu = hardcore_measure(g_prime)
        overlap = sum(
            p * max_independent_set_size(induced_subgraph(g_prime, vs), mis_cap)
            for vs, p in mu.items()
        )
        m2l2 = m2_squared(mu)
        m2r2 = m2_squared(nu)
        if m2l2 == 0 or m2r2 == 0:
            raise DegenerateNormalizationError("hardcore measure concentrated on the empty set")
        m2l = math.sqrt(float(m2l2))
        m2r = math.sqrt(float(m2r2))
        w2sq = 2.0 - 2.0 * float(overlap) / (m2l * m2r)
        return ChaosCertificate(
            n=g.n,
            noise_s=noise_s,
            trials=0,
            overlap_bound=float(overlap),
            m2_left=m2l,
            m2_right=m2r,
            w2sq_lower=w2sq,
            stderr_overlap=0.0,
            stderr_w2sq=0.0,
            fail_rate_left=0.0,
            fail_rate_right=0.0,
            exact=True,
            seed=seed,
        )

    if spec is None:
        raise ValueError("sampling mode needs a sampler spec")
    if trials < 2:
        raise ValueError("need at least 2 trials")
    left = [run_sampler(g, spec, derive_seed(seed, 0, i)) for i in range(trials)]
    right = [run_sampler(g_prime, spec, derive_seed(seed, 1, i)) for i in range(trials)]
    fail_l = sum(0 if r.success else 1 for r in left) / trials
    fail_r = sum(0 if r.success else 1 for r in right) / trials
    if fail_l > fail_threshold or fail_r > fail_threshold:
        raise SamplerQualityError(
            f"sampler FAIL rates {fail_l:.3f}/{fail_r:.3f} exceed {fail_threshold}"
        )
    alphas = [
        float(max_independent_set_size(induced_subgraph(g_prime, r.result), mis_cap))
        for r in left
        if r.success
    ]
    sizes_l = [r.result.size for r in left if r.success]
    sizes_r = [r.result.size for r in right if r.success]
    overlap = float(np.mean(alphas))
    m2l = math.sqrt(float(np.mean(sizes_l)))
    m2r = math.sqrt(float(np.mean(sizes_r)))
    if m2l == 0 or m2r == 0:
        raise DegenerateNormalizationError("all sampled sets empty")
    se_overlap = float(np.std(alphas, ddof=1)) / math.sqrt(len(alphas))
    w2sq = 2.0 - 2.0 * overlap / (m2l * m2r)
    return ChaosCertificate(
        n=g.n,
        noise_s=noise_s,
        trials=trials,
        overlap_bound=overlap,
        m2_left=m2l,
        m2_right=m2r,
        w2sq_lower=w2sq,
        stderr_overlap=se_overlap,
        stderr_w2sq=2.0 * se_overlap / (m2l * m2r),
        fail_rate_left=fail_l,
        fail_rate_right=fail_r,
        exact=False,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# empirical W2 between sample batches
# ---------------------------------------------------------------------------


@dataclass
class EmpiricalW2:
    value: float
    ci_low: float
    ci_high: float
    m: int
    m2_left: float
    m2_right: float
    bootstrap: int
    seed: int


def _assignment_value(xs, ys, m2l, m2r) -> float:
    m = len(xs)
    c = np.empty((m, m))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            c[i, j] = normalized_sq_cost(x, y, m2l, m2r)
    ri, cj = linear_sum_assignment(c)
    return math.sqrt(max(float(c[ri, cj].mean()), 0.0))


def w2_empirical(
    batch_a: SampleBatch,
    batch_b: SampleBatch,
    m: int,
    seed: int,
    bootstrap: int = 100,
) -> EmpiricalW2:
    """Exact m-by-m assignment between subsampled batches, with bootstrap CI.

    Normalizers are estimated from the full batches; the estimator is biased
    for finite m (reported via the CI, not corrected).
    """
    sets_a = batch_a.success_sets()
    sets_b = batch_b.success_sets()
    if not sets_a or not sets_b:
        raise ValueError("batches must contain successful draws")
    if m < 1 or m > min(len(sets_a), len(sets_b)):
        raise ValueError("pairing budget m exceeds available draws")
    m2a2 = float(np.mean([s.size for s in sets_a]))
    m2b2 = float(np.mean([s.size for s in sets_b]))
    if m2a2 == 0 or m2b2 == 0:
        raise DegenerateNormalizationError("batch RMS normalizer is zero")
    m2a, m2b = math.sqrt(m2a2), math.sqrt(m2b2)
    rng = make_rng(seed)
    ia = rng.choice(len(sets_a), size=m, replace=False)
    ib = rng.choice(len(sets_b), size=m, replace=False)
    value = _assignment_value(
        [sets_a[i] for i in ia], [sets_b[j] for j in ib], m2a, m2b
    )
    boots = []
    for _ in range(bootstrap):
        ja = rng.choice(len(sets_a), size=m, replace=True)
        jb = rng.choice(len(sets_b), size=m, replace=True)
        boots.append(
            _assignment_value([sets_a[i] for i in ja], [sets_b[j] for j in jb], m2a, m2b)
        )
    lo, hi = (np.percentile(boots, [2.5, 97.5]) if boots else (value, value))
    return EmpiricalW2(value, float(lo), float(hi), m, m2a, m2b, bootstrap, seed)


# ---------------------------------------------------------------------------
# survival of independent sets under edge resampling
# ---------------------------------------------------------------------------


@dataclass
class SurvivalReport:
    k: int
    s: float
    threshold: int
    estimate: float
    union_bound_envelope: float
    trials: int
    seed: int


def survival_threshold(k: int) -> int:
    """ceil((log2 k)^2), the sub-independent-set size that defines survival."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.ceil(math.log2(k) ** 2)


def survival_probability(k: int, s: float, trials: int, seed: int) -> SurvivalReport:
    """P[alpha(noised empty graph on k vertices) >= ceil((log2 k)^2)].

    Noise turns each pair into an edge with probability s/2 (resample at
    density 1/2).  Also evaluates the union-bound envelope
    C(k, L) * (1 - s/2)^C(L,2) for comparison.
    """
    threshold = survival_threshold(k)
    empty = Graph.empty(k)
    params = NoiseParams(s=s, p=0.5)
    hits = 0
    for i in range(trials):
        noised = resample_noise(empty, params, derive_seed(seed, i))
        if max_independent_set_size(noised) >= threshold:
            hits += 1
    if threshold > k:
        envelope = 0.0
    else:
        envelope = math.comb(k, threshold) * (1.0 - s / 2.0) ** math.comb(threshold, 2)
    return SurvivalReport(
        k=k,
        s=s,
        threshold=threshold,
        estimate=hits / trials if trials else 0.0,
        union_bound_envelope=envelope,
        trials=trials,
        seed=seed,
    )
