"""Exact finitely-supported measures over vertex sets.

The hardcore law at fugacity lambda weights an independent set S by
lambda^|S|; at lambda = 1 it is uniform over independent sets.  Measures are
exact (big rationals) whenever the fugacity is rational, so stationarity and
coupling identities can be checked with zero tolerance.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceededError, EmptyEventError
from .graphs import Graph, VertexSet, full_mask
from .seeding import make_rng

__all__ = [
    "ExactMeasure",
    "SizeProfile",
    "WindowParams",
    "k_star",
    "zk_concentration_cutoff",
    "enumerate_independent_sets",
    "hardcore_measure",
    "condition_on_size",
    "tv_distance",
    "m2",
    "m2_squared",
    "mk_ratio_check",
    "save_measure",
    "load_measure",
    "mixture",
]

ENUMERATION_BUDGET = 10**7

_EXACT_TOL = 1e-12


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def k_star(n: int) -> int:
    """Size-concentration point: nearest integer to log2(n) - log2(log2(n)).

    Ties at .5 round up, so the rule is deterministic.
    """
    if n < 2:
        raise ValueError("k_star needs n >= 2")
    return round_half_up(math.log2(n) - math.log2(math.log2(n)))


def zk_concentration_cutoff(
    n: int, log_coeff: float = 2.0, loglog_coeff: float = 5.0
) -> float:
    """Upper size cut below which Z_k concentrates: 2*log2 n - 5*log2 log2 n.

    The two coefficients are exposed because different analyses use different
    log-log offsets; callers floor and clamp as needed.
    """
    if n < 2:
        raise ValueError("cutoff needs n >= 2")
    return log_coeff * math.log2(n) - loglog_coeff * math.log2(math.log2(n))


@dataclass(frozen=True)
class WindowParams:
    """Conditioning window [kstar - a, kstar + a] around the concentration point."""

    kstar: int
    a: int

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("a must be nonnegative")
        if self.a > self.kstar:
            raise ValueError("window radius a must not exceed kstar")

    @classmethod
    def for_n(cls, n: int, a: int) -> "WindowParams":
        return cls(k_star(n), a)

    @property
    def lo(self) -> int:
        return self.kstar - self.a

    @property
    def hi(self) -> int:
        return self.kstar + self.a


@dataclass(frozen=True)
class SizeProfile:
    """Independent-set counts by size; partition is the total count."""

    zk: tuple[int, ...]
    partition: int

    def __post_init__(self):
        if not self.zk or self.zk[0] != 1:
            raise ValueError("zk[0] must be 1 (the empty set)")
        if sum(self.zk) != self.partition:
            raise ValueError("zk must sum to the partition count")


class ExactMeasure:
    """Finitely supported probability measure over VertexSets.

    Probabilities are Fractions (exact mode) or floats; support entries are
    distinct and kept sorted by (size, bits) for stable serialization.
    Instances are immutable by convention after construction.
    """

    __slots__ = ("support", "probs", "exact")

    def __init__(
        self,
        support: Sequence[VertexSet],
        probs: Sequence,
        _skip_checks: bool = False,
    ):
        pairs = sorted(zip(support, probs), key=lambda it: (it[0].size, it[0].bits))
        self.support: tuple[VertexSet, ...] = tuple(p[0] for p in pairs)
        self.probs: tuple = tuple(p[1] for p in pairs)
        self.exact: bool = all(isinstance(p, (Fraction, int)) for p in self.probs)
        if _skip_checks:
            return
        if len({vs.bits for vs in self.support}) != len(self.support):
            raise ValueError("support entries must be distinct")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        total = sum(self.probs)
        if self.exact:
            if total != 1:
                raise ValueError(f"probabilities must sum to 1 exactly, got {total}")
        elif abs(total - 1.0) > _EXACT_TOL:
            raise ValueError(f"probabilities must sum to 1 within {_EXACT_TOL}")

    @property
    def n(self) -> int:
        return self.support[0].n

    def items(self):
        return zip(self.support, self.probs)

    def as_dict(self) -> dict[int, object]:
        return {vs.bits: p for vs, p in self.items()}

    def prob_of(self, vs: VertexSet):
        for s, p in self.items():
            if s.bits == vs.bits:
                return p
        return Fraction(0) if self.exact else 0.0

    def size_marginal(self) -> dict[int, object]:
        out: dict[int, object] = {}
        for vs, p in self.items():
            out[vs.size] = out.get(vs.size, Fraction(0) if self.exact else 0.0) + p
        return out

    def sample(self, rng_or_seed) -> VertexSet:
        rng = rng_or_seed if hasattr(rng_or_seed, "random") else make_rng(rng_or_seed)
        u = rng.random()
        acc = 0.0
        for vs, p in self.items():
            acc += float(p)
            if u < acc:
                return vs
        return self.support[-1]

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return f"ExactMeasure({len(self.support)} atoms, exact={self.exact})"


def enumerate_independent_sets(
    g: Graph, max_size: int | None = None, budget: int = ENUMERATION_BUDGET
) -> tuple[SizeProfile, list[VertexSet]]:
    """All independent sets of g (of size <= max_size if capped), plus exact Z_k.

    Raises BudgetExceededError naming the count reached when the enumeration
    would exceed ``budget`` sets.
    """
    cap = g.n if max_size is None else min(max_size, g.n)
    sets: list[VertexSet] = []
    zk = [0] * (cap + 1)
    count = 0

    def rec(bits: int, cand: int, size: int) -> None:
        nonlocal count
        count += 1
        if count > budget:
            raise BudgetExceededError("independent-set enumeration over budget", count)
        sets.append(VertexSet(g.n, bits))
        zk[size] += 1
        if size == cap:
            return
        rem = cand
        while rem:
            low = rem & -rem
            rem ^= low
            v = low.bit_length() - 1
            rec(bits | low, rem & ~g.rows[v], size + 1)

    rec(0, full_mask(g.n), 0)
    while len(zk) > 1 and zk[-1] == 0:
        zk.pop()
    return SizeProfile(tuple(zk), count), sets


def hardcore_measure(g: Graph, lam=1, budget: int = ENUMERATION_BUDGET) -> ExactMeasure:
    """Hardcore law on g: P(S) proportional to lam^|S| over independent sets.

    Exact rationals whenever ``lam`` is an int or Fraction; floats otherwise.
    """
    _, sets = enumerate_independent_sets(g, budget=budget)
    exact = isinstance(lam, (int, Fraction)) and not isinstance(lam, bool)
    if exact:
        lam = Fraction(lam)
        weights = [lam ** vs.size for vs in sets]
        total = sum(weights)
        probs = [w / total for w in weights]
    else:
        logw = [vs.size * math.log(lam) for vs in sets]
        mx = max(logw)
        w = [math.exp(x - mx) for x in logw]
        total = sum(w)
        probs = [x / total for x in w]
    return ExactMeasure(sets, probs)


def condition_on_size(mu: ExactMeasure, kmin: int, kmax: int) -> ExactMeasure:
    """Restrict to sets with kmin <= |S| <= kmax and renormalize."""
    pairs = [(vs, p) for vs, p in mu.items() if kmin <= vs.size <= kmax]
    total = sum(p for _, p in pairs)
    if not pairs or total == 0:
        raise EmptyEventError(f"no mass on sizes in [{kmin},{kmax}]")
    if mu.exact:
        return ExactMeasure([vs for vs, _ in pairs], [p / total for _, p in pairs])
    return ExactMeasure(
        [vs for vs, _ in pairs], [float(p) / float(total) for _, p in pairs]
    )


def tv_distance(mu: ExactMeasure, nu: ExactMeasure):
    """Half the L1 distance over the union support; in [0,1].

    Exact Fraction when both measures are exact.
    """
    a = mu.as_dict()
    b = nu.as_dict()
    exact = mu.exact and nu.exact
    zero = Fraction(0) if exact else 0.0
    total = zero
    for bits in set(a) | set(b):
        total += abs(a.get(bits, zero) - b.get(bits, zero))
    return total / 2


def m2_squared(mu: ExactMeasure):
    """Expected squared indicator norm, i.e. the expected set size."""
    return sum(p * vs.size for vs, p in mu.items())


def m2(mu: ExactMeasure) -> float:
    """RMS norm of the measure: sqrt of the expected set size."""
    return math.sqrt(float(m2_squared(mu)))


def mk_ratio_check(n: int, k: int) -> tuple[float, float]:
    """Adjacent expected-count ratios (M_{k+1}/M_k, M_{k-1}/M_k).

    Exact formulas (n-k)/((k+1) 2^k) and k 2^(k-1)/(n-k+1); the backward ratio
    is undefined at k = 0, which is rejected.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if k == 0:
        raise ValueError("backward ratio undefined at k=0")
    forward = Fraction(n - k, (k + 1) * (1 << k))
    backward = Fraction(k * (1 << (k - 1)), n - k + 1)
    return float(forward), float(backward)


def save_measure(mu: ExactMeasure, csv_path, graph_hash: str, lam=1) -> None:
    """CSV dump ``set_bits_hex,probability`` plus a JSON sidecar."""
    with open(csv_path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh)
        w.writerow(["set_bits_hex", "probability"])
        for vs, p in mu.items():
            text = f"{p.numerator}/{p.denominator}" if isinstance(p, Fraction) else repr(float(p))
            w.writerow([vs.to_hex(), text])
    sidecar = {"n": mu.n, "lambda": str(lam), "graph_hash": graph_hash}
    with open(str(csv_path) + ".json", "w", encoding="ascii") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_measure(csv_path) -> tuple[ExactMeasure, dict]:
    with open(str(csv_path) + ".json", "r", encoding="ascii") as fh:
        sidecar = json.load(fh)
    n = int(sidecar["n"])
    support: list[VertexSet] = []
    probs: list = []
    with open(csv_path, "r", newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["set_bits_hex", "probability"]:
            raise ValueError(f"unexpected measure CSV header: {header}")
        for bits_hex, text in reader:
            support.append(VertexSet.from_hex(n, bits_hex))
            probs.append(Fraction(text) if "/" in text else float(text))
    return ExactMeasure(support, probs), sidecar


def mixture(components: Iterable[tuple[object, ExactMeasure]]) -> ExactMeasure:
    """Weighted mixture of measures over a common ground space."""
    acc: dict[int, object] = {}
    n = None
    exact = True
    for weight, comp in components:
        exact = exact and comp.exact and isinstance(weight, (Fraction, int))
        n = comp.n if n is None else n
        for vs, p in comp.items():
            acc[vs.bits] = acc.get(vs.bits, Fraction(0)) + weight * p
    if n is None:
        raise ValueError("mixture of no components")
    support = [VertexSet(n, bits) for bits in acc]
    probs = [acc[vs.bits] if exact else float(acc[vs.bits]) for vs in support]
    return ExactMeasure(support, probs)
