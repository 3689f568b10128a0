"""Brute-force ground truth: exact sampler laws, exact stopped-chain
distributions, the bipartite extension walk with its time reversal, and
small-case verifiers for the combinatorial counting bounds.

Everything here favors auditability over speed; exact rational arithmetic is
available wherever an acceptance check demands zero tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .errors import BudgetExceededError, EmptyEventError, HardcoreError
from .graphs import (
    Graph,
    VertexSet,
    compatible_mask,
    full_mask,
    gen_gnp,
    iter_bits,
)
from .measures import (
    ExactMeasure,
    condition_on_size,
    enumerate_independent_sets,
    hardcore_measure,
    k_star,
    m2_squared,
)
from .seeding import derive_seed

__all__ = [
    "TransitionOperator",
    "time_reversal",
    "exact_glauber_kernel",
    "detailed_balance_witness",
    "OutcomeLaw",
    "exact_stopped_glauber",
    "exact_greedy_law",
    "ExtensionWalk",
    "extension_walk",
    "degree_weighted_left_measure",
    "LemmaCheckReport",
    "check_vertex_overlap",
    "check_edge_bound",
    "check_config_bound",
    "MomentProbeReport",
    "ell_updeg_moment_probe",
    "moment_probe_constants",
    "brute_force_min_coupling",
    "extension_walk_w2_plan",
]

STATE_BUDGET = 10**4
TUPLE_BUDGET = 10**7


# ---------------------------------------------------------------------------
# transition operators and time reversal
# ---------------------------------------------------------------------------


@dataclass
class TransitionOperator:
    """Row-stochastic kernel between two ordered state lists.

    Square kernels have row_states == col_states; the extension walk uses the
    rectangular form (one step up the containment order).
    """

    row_states: tuple[VertexSet, ...]
    col_states: tuple[VertexSet, ...]
    matrix: tuple[tuple, ...]
    exact: bool

    def __post_init__(self):
        for r, row in enumerate(self.matrix):
            total = sum(row)
            if self.exact:
                if total != 1:
                    raise ValueError(f"row {r} sums to {total}, expected 1")
            elif abs(total - 1.0) > 1e-12:
                raise ValueError(f"row {r} sums to {total}")

    def apply_left(self, probs):
        """Pushforward mu P of a measure aligned with row_states."""
        zero = Fraction(0) if self.exact else 0.0
        out = [zero] * len(self.col_states)
        for i, p in enumerate(probs):
            if p:
                row = self.matrix[i]
                for j, q in enumerate(row):
                    if q:
                        out[j] += p * q
        return out

    def entry(self, i: int, j: int):
        return self.matrix[i][j]


def time_reversal(op: TransitionOperator, mu_probs) -> TransitionOperator:
    """Reversal P' with P'(j,i) = P(i,j) mu(i) / (mu P)(j).

    Satisfies mu P P' = mu and inherits the zero pattern transposed.
    """
    push = op.apply_left(mu_probs)
    if any(p == 0 for p in push):
        raise HardcoreError("time reversal undefined on states with zero pushforward mass")
    rows = []
    for j in range(len(op.col_states)):
        rows.append(
            tuple(
                op.matrix[i][j] * mu_probs[i] / push[j]
                for i in range(len(op.row_states))
            )
        )
    return TransitionOperator(
        row_states=op.col_states,
        col_states=op.row_states,
        matrix=tuple(rows),
        exact=op.exact,
    )


def exact_glauber_kernel(
    g: Graph, lam=1, budget: int = STATE_BUDGET
) -> tuple[TransitionOperator, ExactMeasure]:
    """Unstopped single-site kernel over all independent sets, with its
    hardcore stationary measure.  Exact rationals for rational fugacity."""
    mu = hardcore_measure(g, lam, budget=budget)
    states = mu.support
    index = {vs.bits: i for i, vs in enumerate(states)}
    n = g.n
    lam = Fraction(lam) if isinstance(lam, int) else lam
    exact = isinstance(lam, Fraction)
    one = Fraction(1) if exact else 1.0
    p_in = lam / (1 + lam)
    p_out = one - p_in
    step = one / n
    rows = []
    for vs in states:
        row = [Fraction(0) if exact else 0.0] * len(states)
        stay = Fraction(0) if exact else 0.0
        for v in range(n):
            b = 1 << v
            if vs.bits & b:
                row[index[vs.bits ^ b]] += step * p_out
                stay += step * p_in
            elif g.rows[v] & vs.bits:
                stay += step
            else:
                row[index[vs.bits | b]] += step * p_in
                stay += step * p_out
        row[index[vs.bits]] += stay
        rows.append(tuple(row))
    op = TransitionOperator(states, states, tuple(rows), exact)
    return op, mu


def detailed_balance_witness(op: TransitionOperator, probs):
    """First (x, y) violating mu(x)P(x,y) == mu(y)P(y,x), or None."""
    k = len(op.row_states)
    for i in range(k):
        for j in range(i + 1, k):
            lhs = probs[i] * op.matrix[i][j]
            rhs = probs[j] * op.matrix[j][i]
            if lhs != rhs:
                return (op.row_states[i], op.row_states[j], lhs, rhs)
    return None


# ---------------------------------------------------------------------------
# exact stopped-Glauber and greedy output laws
# ---------------------------------------------------------------------------


@dataclass
class OutcomeLaw:
    """Exact law of a sampler over SUCCESS sets plus a FAIL atom."""

    success_states: tuple[VertexSet, ...]
    success_probs: tuple
    fail_prob: object
    exact: bool

    def success_mass(self):
        return sum(self.success_probs)

    def as_success_measure(self) -> ExactMeasure:
        total = self.success_mass()
        if total == 0:
            raise EmptyEventError("no success mass to condition on")
        if self.exact:
            probs = [p / total for p in self.success_probs]
        else:
            probs = [float(p) / float(total) for p in self.success_probs]
        return ExactMeasure(list(self.success_states), probs)

    def outcome_dict(self) -> dict:
        out = {vs.bits: p for vs, p in zip(self.success_states, self.success_probs)}
        out["FAIL"] = self.fail_prob
        return out


def exact_stopped_glauber(
    g: Graph, s: int, horizon: int, lam=1, exact: bool = False, budget: int = STATE_BUDGET
) -> OutcomeLaw:
    """Law of the stopped chain by dense T-step propagation.

    Transient states are the independent sets of size < s; size-s states
    absorb.  Float mode uses numpy; exact mode propagates Fractions through a
    sparse successor list (meant for small horizons).
    """
    if s == 0:
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        return OutcomeLaw((VertexSet.empty(g.n),), (one,), zero, exact)
    _, sets = enumerate_independent_sets(g, max_size=s, budget=budget)
    transient = [vs for vs in sets if vs.size < s]
    absorbing = [vs for vs in sets if vs.size == s]
    t_index = {vs.bits: i for i, vs in enumerate(transient)}
    a_index = {vs.bits: i for i, vs in enumerate(absorbing)}
    n = g.n
    lam_q = Fraction(lam) if isinstance(lam, int) else lam
    if exact and not isinstance(lam_q, Fraction):
        raise ValueError("exact propagation needs a rational fugacity")

    if exact:
        p_in = lam_q / (1 + lam_q)
        p_out = 1 - p_in
        step = Fraction(1, n)
        succ: list[list[tuple[int, Fraction]]] = []
        absb: list[list[tuple[int, Fraction]]] = []
        for vs in transient:
            row: dict[int, Fraction] = {}
            arow: dict[int, Fraction] = {}
            stay = Fraction(0)
            for v in range(n):
                b = 1 << v
                if vs.bits & b:
                    row[t_index[vs.bits ^ b]] = row.get(t_index[vs.bits ^ b], Fraction(0)) + step * p_out
                    stay += step * p_in
                elif g.rows[v] & vs.bits:
                    stay += step
                else:
                    target = vs.bits | b
                    if target in a_index:
                        arow[a_index[target]] = arow.get(a_index[target], Fraction(0)) + step * p_in
                    else:
                        row[t_index[target]] = row.get(t_index[target], Fraction(0)) + step * p_in
                    stay += step * p_out
            i0 = t_index[vs.bits]
            row[i0] = row.get(i0, Fraction(0)) + stay
            succ.append(sorted(row.items()))
            absb.append(sorted(arow.items()))
        v = [Fraction(0)] * len(transient)
        v[t_index[0]] = Fraction(1)
        absorbed = [Fraction(0)] * len(absorbing)
        for _ in range(horizon):
            nxt = [Fraction(0)] * len(transient)
            for i, p in enumerate(v):
                if p:
                    for j, q in succ[i]:
                        nxt[j] += p * q
                    for j, q in absb[i]:
                        absorbed[j] += p * q
            v = nxt
        return OutcomeLaw(tuple(absorbing), tuple(absorbed), sum(v), True)

    p_in = float(lam_q) / (1.0 + float(lam_q))
    p_out = 1.0 - p_in
    step = 1.0 / n
    q = np.zeros((len(transient), len(transient)))
    r = np.zeros((len(transient), max(len(absorbing), 1)))
    for vs in transient:
        i0 = t_index[vs.bits]
        stay = 0.0
        for v in range(n):
            b = 1 << v
            if vs.bits & b:
                q[i0, t_index[vs.bits ^ b]] += step * p_out
                stay += step * p_in
            elif g.rows[v] & vs.bits:
                stay += step
            else:
                target = vs.bits | b
                if target in a_index:
                    r[i0, a_index[target]] += step * p_in
                else:
                    q[i0, t_index[target]] += step * p_in
                stay += step * p_out
        q[i0, i0] += stay
    vec = np.zeros(len(transient))
    vec[t_index[0]] = 1.0
    absorbed = np.zeros(max(len(absorbing), 1))
    for _ in range(horizon):
        absorbed += vec @ r
        vec = vec @ q
    return OutcomeLaw(
        tuple(absorbing),
        tuple(float(x) for x in absorbed[: len(absorbing)]),
        float(vec.sum()),
        False,
    )


def exact_greedy_law(g: Graph, s: int, budget: int = STATE_BUDGET) -> OutcomeLaw:
    """Exact greedy output law by recursion over the level structure.

    Each state moves to a uniformly chosen compatible superset; empty
    candidate sets contribute FAIL mass.
    """
    level: dict[int, Fraction] = {0: Fraction(1)}
    fail = Fraction(0)
    for _ in range(s):
        nxt: dict[int, Fraction] = {}
        for bits, p in level.items():
            cand = compatible_mask(g, bits)
            count = cand.bit_count()
            if count == 0:
                fail += p
                continue
            share = p / count
            for v in iter_bits(cand):
                key = bits | (1 << v)
                nxt[key] = nxt.get(key, Fraction(0)) + share
        if len(nxt) > budget:
            raise BudgetExceededError("greedy state budget exceeded", len(nxt))
        level = nxt
    states = tuple(VertexSet(g.n, bits) for bits in sorted(level))
    probs = tuple(level[vs.bits] for vs in states)
    return OutcomeLaw(states, probs, fail, True)


# ---------------------------------------------------------------------------
# the extension walk (one step up the containment order) and its reversal
# ---------------------------------------------------------------------------


@dataclass
class ExtensionWalk:
    """Bipartite containment walk from k_minus-sets (L) to k-sets (R).

    P maps each non-isolated left state to a uniform extension; P' is the time
    reversal with respect to the greedy output law on L (restricted to the
    non-isolated states).  Left states with no extension are flagged, not
    errors.
    """

    k_minus: int
    k: int
    left_states: tuple[VertexSet, ...]
    right_states: tuple[VertexSet, ...]
    isolated_left: tuple[VertexSet, ...]
    P: TransitionOperator
    P_prime: TransitionOperator
    left_law: tuple  # greedy law restricted to left_states, renormalized


def _completions(g: Graph, bits: int, ell: int) -> list[int]:
    """All independent ell-supersets' added bitmasks, ascending DFS order."""
    out: list[int] = []
    cand0 = compatible_mask(g, bits)

    def rec(chosen: int, cand: int, remaining: int) -> None:
        if remaining == 0:
            out.append(chosen)
            return
        rem = cand
        while rem:
            low = rem & -rem
            rem ^= low
            rec(chosen | low, rem & ~g.rows[low.bit_length() - 1], remaining - 1)

    rec(0, cand0, ell)
    return out


def extension_walk(
    g: Graph, k_minus: int, k: int, budget: int = STATE_BUDGET
) -> ExtensionWalk:
    if not 0 <= k_minus < k:
        raise ValueError("need 0 <= k_minus < k")
    _, sets = enumerate_independent_sets(g, max_size=k, budget=budget)
    lefts = [vs for vs in sets if vs.size == k_minus]
    rights = [vs for vs in sets if vs.size == k]
    if not rights:
        raise EmptyEventError(f"graph has no independent sets of size {k}")
    r_index = {vs.bits: j for j, vs in enumerate(rights)}
    ext: dict[int, list[int]] = {}
    isolated = []
    active = []
    for vs in lefts:
        comps = _completions(g, vs.bits, k - k_minus)
        if comps:
            active.append(vs)
            ext[vs.bits] = [r_index[vs.bits | c] for c in comps]
        else:
            isolated.append(vs)
    rows = []
    for vs in active:
        row = [Fraction(0)] * len(rights)
        share = Fraction(1, len(ext[vs.bits]))
        for j in ext[vs.bits]:
            row[j] += share
        rows.append(tuple(row))
    p_op = TransitionOperator(tuple(active), tuple(rights), tuple(rows), True)
    greedy = exact_greedy_law(g, k_minus)
    gmap = {vs.bits: p for vs, p in zip(greedy.success_states, greedy.success_probs)}
    raw = [gmap.get(vs.bits, Fraction(0)) for vs in active]
    total = sum(raw)
    if total == 0:
        raise EmptyEventError("greedy law places no mass on non-isolated left states")
    left_law = tuple(p / total for p in raw)
    p_prime = time_reversal(p_op, left_law)
    return ExtensionWalk(
        k_minus=k_minus,
        k=k,
        left_states=tuple(active),
        right_states=tuple(rights),
        isolated_left=tuple(isolated),
        P=p_op,
        P_prime=p_prime,
        left_law=left_law,
    )


def degree_weighted_left_measure(walk: ExtensionWalk) -> tuple:
    """Left measure proportional to extension counts (the walk's stationary
    left marginal); its pushforward is uniform on R exactly when all right
    degrees agree."""
    degs = []
    for row in walk.P.matrix:
        nonzero = [q for q in row if q]
        degs.append(Fraction(len(nonzero)))
    total = sum(degs)
    return tuple(d / total for d in degs)


# ---------------------------------------------------------------------------
# combinatorial counting checks
# ---------------------------------------------------------------------------


@dataclass
class LemmaCheckReport:
    check_name: str
    parameters: dict
    verdict: bool
    counterexample: dict | None
    tuples_checked: int
    capped: bool
    notes: str = ""

    def to_json(self) -> str:
        payload = {
            "check_name": self.check_name,
            "parameters": self.parameters,
            "verdict": self.verdict,
            "tuples_checked": self.tuples_checked,
            "capped": self.capped,
            "notes": self.notes,
        }
        if self.counterexample is not None:
            payload["counterexample"] = self.counterexample
        return json.dumps(payload, sort_keys=True)


def _tuple_iter(m: int, ell: int, d: int, budget: int):
    subs = list(combinations(range(m), ell))
    count = 0
    for tup in product(subs, repeat=d):
        if count >= budget:
            return
        count += 1
        yield tup


def check_vertex_overlap(
    m: int, ell: int, d: int, budget: int = TUPLE_BUDGET
) -> LemmaCheckReport:
    """Whenever |A_1 ∪ ... ∪ A_d| > d*ell - d/2, some A_j is disjoint from the rest.

    The threshold is tested literally over the reals (d/2 not rounded).
    """
    params = {"m": m, "ell": ell, "d": d}
    checked = 0
    nsubs = math.comb(m, ell)
    capped = nsubs**d > budget
    for tup in _tuple_iter(m, ell, d, budget):
        checked += 1
        union = set().union(*tup)
        if len(union) * 2 > 2 * d * ell - d:  # |union| > d*ell - d/2, integerized
            ok = False
            for j in range(d):
                others = set()
                for i in range(d):
                    if i != j:
                        others.update(tup[i])
                if not (set(tup[j]) & others):
                    ok = True
                    break
            if not ok:
                return LemmaCheckReport(
                    "vertex_overlap", params, False,
                    {"tuple": [sorted(a) for a in tup], "union_size": len(union)},
                    checked, capped,
                )
    return LemmaCheckReport("vertex_overlap", params, True, None, checked, capped)


def check_edge_bound(m: int, ell: int, d: int, budget: int = TUPLE_BUDGET) -> LemmaCheckReport:
    """Pair-union lower bound d*C(ell,2) - min{(a/ell)C(ell,2), C(a,2)} where
    a = d*ell - |union|; applies to tuples with d*ell < m."""
    params = {"m": m, "ell": ell, "d": d}
    if d * ell >= m:
        return LemmaCheckReport(
            "edge_bound", params, True, None, 0, False, notes="vacuous: d*ell >= m"
        )
    checked = 0
    nsubs = math.comb(m, ell)
    capped = nsubs**d > budget
    cl2 = math.comb(ell, 2)
    for tup in _tuple_iter(m, ell, d, budget):
        checked += 1
        union = set().union(*tup)
        a = d * ell - len(union)
        pairs = set()
        for sub in tup:
            pairs.update(combinations(sub, 2))
        bound = d * cl2 - min(Fraction(a, ell) * cl2, Fraction(math.comb(a, 2)))
        if Fraction(len(pairs)) < bound:
            return LemmaCheckReport(
                "edge_bound", params, False,
                {"tuple": [sorted(x) for x in tup], "a": a, "pairs": len(pairs),
                 "bound": str(bound)},
                checked, capped,
            )
    return LemmaCheckReport("edge_bound", params, True, None, checked, capped)


def check_config_bound(
    m: int, ell: int, d: int, budget: int = TUPLE_BUDGET, literal_stars_bars: bool = False
) -> LemmaCheckReport:
    """Configuration-count bound N_a <= C(m, d*ell-a) * C(d*ell-1, a) * (d*ell)!/(ell!)^d.

    The stars-and-bars factor distributes the a excess multiplicities over the
    d*ell-a distinct elements, which gives C(a + (d*ell-a) - 1, a) =
    C(d*ell-1, a).  ``literal_stars_bars`` switches to the off-by-one variant
    C(d*ell-1, a-1), which small-case enumeration refutes at a = 1.
    """
    params = {"m": m, "ell": ell, "d": d, "literal_stars_bars": literal_stars_bars}
    counts: dict[int, int] = {}
    checked = 0
    nsubs = math.comb(m, ell)
    capped = nsubs**d > budget
    for tup in _tuple_iter(m, ell, d, budget):
        checked += 1
        union = set().union(*tup)
        a = d * ell - len(union)
        counts[a] = counts.get(a, 0) + 1
    ordered = math.factorial(d * ell) // (math.factorial(ell) ** d)
    for a, n_a in sorted(counts.items()):
        if literal_stars_bars:
            stars = math.comb(d * ell - 1, a - 1) if a >= 1 else 0
        else:
            stars = math.comb(d * ell - 1, a)
        bound = math.comb(m, d * ell - a) * stars * ordered
        if n_a > bound:
            return LemmaCheckReport(
                "config_bound", params, False,
                {"a": a, "N_a": n_a, "bound": bound},
                checked, capped,
            )
    return LemmaCheckReport("config_bound", params, True, None, checked, capped)


# ---------------------------------------------------------------------------
# multi-vertex up-degree concentration probe
# ---------------------------------------------------------------------------


@dataclass
class MomentProbeReport:
    n: int
    ell: int
    k_minus: int
    num_graphs: int
    closed_form_mean: float
    empirical_mean: float
    empirical_std: float
    stderr: float
    z_score: float
    rel_spread: float
    values: tuple[int, ...] = field(repr=False, default=())


def _count_indep_subsets_of_mask(rows: list[int], cand: int, ell: int) -> int:
    if ell == 0:
        return 1
    if ell == 1:
        return cand.bit_count()
    total = 0
    rem = cand
    while rem:
        low = rem & -rem
        rem ^= low
        total += _count_indep_subsets_of_mask(rows, rem & ~rows[low.bit_length() - 1], ell - 1)
    return total


def ell_updeg_moment_probe(
    n: int, ell: int, k_minus: int, num_graphs: int, seed: int
) -> MomentProbeReport:
    """Empirical ell-up-degree of a fixed k_minus-set across graph draws.

    The closed-form mean is C(n-k_minus, ell) * 2^(-ell*k_minus - C(ell,2)).
    Edges inside the probed set are cleared before measuring; they do not
    enter the statistic, so the law is unchanged while the set is made
    independent for the up-degree contract.
    """
    if k_minus < 0 or k_minus >= n:
        raise ValueError("need 0 <= k_minus < n")
    s_bits = full_mask(k_minus)
    values = []
    for i in range(num_graphs):
        g = gen_gnp(n, 0.5, derive_seed(seed, i))
        rows = list(g.rows)
        for u in iter_bits(s_bits):
            rows[u] &= ~s_bits
        cand = full_mask(n) & ~s_bits
        for u in iter_bits(s_bits):
            cand &= ~rows[u]
        values.append(_count_indep_subsets_of_mask(rows, cand, ell))
    mean_cf = float(
        Fraction(math.comb(n - k_minus, ell), 1 << (ell * k_minus + math.comb(ell, 2)))
    )
    arr = np.asarray(values, dtype=float)
    emp_mean = float(arr.mean())
    emp_std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    stderr = emp_std / math.sqrt(len(arr)) if len(arr) > 1 else float("inf")
    z = (emp_mean - mean_cf) / stderr if stderr > 0 else 0.0
    return MomentProbeReport(
        n=n,
        ell=ell,
        k_minus=k_minus,
        num_graphs=num_graphs,
        closed_form_mean=mean_cf,
        empirical_mean=emp_mean,
        empirical_std=emp_std,
        stderr=stderr,
        z_score=z,
        rel_spread=emp_std / mean_cf if mean_cf else float("inf"),
        values=tuple(values),
    )


def moment_probe_constants(n: int, c_const: float, b_const: float) -> tuple[int, int]:
    """(k_minus, ell) from the size constants: k- = round(log2 n - C loglog n),
    ell = round(B loglog n).  Rejects regimes where the formula is nonpositive."""
    loglog = math.log2(math.log2(n))
    k_minus = math.floor(math.log2(n) - c_const * loglog + 0.5)
    ell = max(1, math.floor(b_const * loglog + 0.5))
    if k_minus < 1:
        raise ValueError(
            f"size constant C={c_const} gives nonpositive k- at n={n}; "
            "the formula only activates at astronomically large n"
        )
    return k_minus, ell


# ---------------------------------------------------------------------------
# brute-force coupling search (vertex enumeration of the transport polytope)
# ---------------------------------------------------------------------------


def _solve_exact(a_rows: list[list[Fraction]], b: list[Fraction]):
    """Unique exact solution of A x = b, or None if inconsistent/underdetermined."""
    rows = [list(r) + [bv] for r, bv in zip(a_rows, b)]
    ncols = len(a_rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return None  # inconsistent
    if len(pivots) < ncols:
        return None  # underdetermined
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def brute_force_min_coupling(
    left: list[Fraction], right: list[Fraction], cost: list[list]
) -> Fraction:
    """Minimum coupling cost by enumerating candidate vertex supports.

    Every optimum of the transportation polytope sits at a vertex whose
    support has at most m+l-1 cells and solves the marginal equations
    uniquely; enumerating those supports is an independent check of the
    network solver.  Intended for supports of size <= 4.
    """
    m, l = len(left), len(right)
    if m > 4 or l > 4:
        raise ValueError("brute-force coupling search is capped at 4x4 supports")
    cells = [(i, j) for i in range(m) for j in range(l)]
    best = None
    for size in range(1, m + l):
        for subset in combinations(cells, size):
            a_rows = []
            b = []
            for i in range(m):
                a_rows.append([Fraction(1 if ci == i else 0) for ci, _ in subset])
                b.append(Fraction(left[i]))
            for j in range(l):
                a_rows.append([Fraction(1 if cj == j else 0) for _, cj in subset])
                b.append(Fraction(right[j]))
            x = _solve_exact(a_rows, b)
            if x is None or any(v < 0 for v in x):
                continue
            total = sum(v * Fraction(cost[ci][cj]) for v, (ci, cj) in zip(x, subset))
            if best is None or total < best:
                best = total
    if best is None:
        raise HardcoreError("no feasible coupling vertex found")
    return best


# ---------------------------------------------------------------------------
# explicit extension-walk coupling plan (upper-bound witness)
# ---------------------------------------------------------------------------


def extension_walk_w2_plan(g: Graph, k_minus: int, a: int):
    """Explicit coupling between the greedy law at k_minus and the hardcore law.

    For each size k inside the window [k*-a, k*+a], the greedy law is pushed
    one step up the containment order, coupled with the size-k conditional by
    the max-overlap (TV-optimal) coupling, and pulled back through the time
    reversal; sizes outside the window (or where the walk is unavailable) fall
    back to the product coupling.  Mixing the per-size plans with the size
    marginal weights yields a valid plan between the two laws.

    Returns (TransportPlan, diagnostics).
    """
    from .transport import TransportPlan  # local import avoids a cycle

    mu = hardcore_measure(g)
    greedy = exact_greedy_law(g, k_minus)
    alg = greedy.as_success_measure()
    diag: dict = {"greedy_fail_prob": str(greedy.fail_prob), "product_sizes": []}
    m2l = math.sqrt(float(m2_squared(alg)))
    m2r = math.sqrt(float(m2_squared(mu)))
    ks = k_star(g.n)
    lo, hi = ks - a, ks + a
    left_index = {vs.bits: i for i, vs in enumerate(alg.support)}
    right_index = {vs.bits: j for j, vs in enumerate(mu.support)}
    plan = [[Fraction(0)] * len(mu.support) for _ in alg.support]
    weights = mu.size_marginal()
    for k in sorted(weights):
        w_k = weights[k]
        mu_k = condition_on_size(mu, k, k)
        use_walk = lo <= k <= hi and k > k_minus
        walk = None
        if use_walk:
            walk = extension_walk(g, k_minus, k)
            iso_mass = sum(
                alg.prob_of(vs) for vs in walk.isolated_left
            )
            if iso_mass != 0 or greedy.fail_prob != 0:
                # the reversal measure would differ from alg; fall back
                use_walk = False
        if use_walk:
            walk_left = {vs.bits: i for i, vs in enumerate(walk.left_states)}
            alg_vec = [Fraction(0)] * len(walk.left_states)
            for vs, p in alg.items():
                alg_vec[walk_left[vs.bits]] = p
            push = walk.P.apply_left(alg_vec)  # over walk.right_states
            mu_k_vec = [mu_k.prob_of(vs) for vs in walk.right_states]
            common = [min(x, y) for x, y in zip(push, mu_k_vec)]
            res_l = [x - c for x, c in zip(push, common)]
            res_r = [y - c for y, c in zip(mu_k_vec, common)]
            tv = sum(res_l)
            for j_r, y_state in enumerate(walk.right_states):
                # gamma(x', y): diagonal common mass plus product residual
                col = right_index[y_state.bits]
                for j_mid, mid_state in enumerate(walk.right_states):
                    gamma = Fraction(0)
                    if j_mid == j_r:
                        gamma += common[j_mid]
                    if tv > 0 and res_r[j_r] > 0 and res_l[j_mid] > 0:
                        gamma += res_l[j_mid] * res_r[j_r] / tv
                    if gamma == 0:
                        continue
                    # pull the mid state back through the reversal
                    prow = walk.P_prime.matrix[j_mid]
                    for i_l, q in enumerate(prow):
                        if q:
                            i = left_index[walk.left_states[i_l].bits]
                            plan[i][col] += w_k * gamma * q
        else:
            diag["product_sizes"].append(k)
            for vs, p in alg.items():
                i = left_index[vs.bits]
                for y, qy in mu_k.items():
                    plan[i][right_index[y.bits]] += w_k * p * qy
    plan_t = tuple(tuple(row) for row in plan)
    cost = 0.0
    for i, x in enumerate(alg.support):
        for j, y in enumerate(mu.support):
            if plan_t[i][j]:
                cost += float(plan_t[i][j]) * (
                    x.size / m2l**2 + y.size / m2r**2 - 2.0 * x.overlap(y) / (m2l * m2r)
                )
    plan_obj = TransportPlan(
        left_support=tuple(alg.support),
        right_support=tuple(mu.support),
        left_probs=tuple(alg.probs),
        right_probs=tuple(mu.probs),
        plan=plan_t,
        m2_left=m2l,
        m2_right=m2r,
        cost=cost,
        exact=True,
    )
    return plan_obj, diag
