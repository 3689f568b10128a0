"""Samplers for independent sets: stopped Glauber dynamics, randomized greedy,
their shared-randomness coupling, and the uniform extension step.

All samplers are pure functions of (graph, params, seed); batches derive one
child seed per trial so results are independent of execution order.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

from .errors import BudgetExceededError
from .graphs import (
    Graph,
    VertexSet,
    compatible_mask,
    full_mask,
    is_independent,
    nth_set_bit,
)
from .seeding import derive_seed, make_rng

__all__ = [
    "GlauberParams",
    "RunRecord",
    "SamplerSpec",
    "default_horizon",
    "glauber_run",
    "greedy_run",
    "coupled_run",
    "extend_uniform",
    "run_sampler",
    "SampleBatch",
    "sample_batch",
    "save_batch",
    "load_batch",
]

_RNG_BLOCK = 4096
EXTENSION_BUDGET = 10**7


def default_horizon(n: int, k: int) -> int:
    """Step budget ceil(100 * 2^k * log2 n) for a size-k target."""
    if n < 2:
        raise ValueError("horizon needs n >= 2")
    return math.ceil(100 * (2**k) * math.log2(n))


@dataclass(frozen=True)
class GlauberParams:
    """Target size, step budget, and fugacity for a stopped Glauber run."""

    target_size: int
    horizon: int
    lam: float = 1.0

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.target_size < 0:
            raise ValueError("target size must be nonnegative")
        if not self.lam > 0:
            raise ValueError("fugacity must be positive")


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one sampler run.

    On success ``result`` is an independent set of the target cardinality;
    ``order`` records greedy insertion order (None for Glauber).
    """

    success: bool
    result: VertexSet | None
    steps_used: int
    adds: int
    drops: int
    blocked: int
    seed: int
    order: tuple[int, ...] | None = None


def glauber_run(g: Graph, params: GlauberParams, seed: int) -> RunRecord:
    """Single-site dynamics from the empty set, stopped at the target size.

    Each step draws a uniform vertex v.  A proposal whose addition would
    violate independence leaves the state unchanged (blocked step); otherwise
    the v-coordinate is resampled, landing in the set with probability
    lam/(1+lam).  Returns at the first time the state has the target size,
    FAIL if the horizon is exhausted first.  Deterministic per seed.
    """
    n, rows = g.n, g.rows
    target, horizon = params.target_size, params.horizon
    if target > n:
        raise ValueError("target size exceeds vertex count")
    if target == 0:
        return RunRecord(True, VertexSet.empty(n), 0, 0, 0, 0, seed)
    rng = make_rng(seed)
    p_in = params.lam / (1.0 + params.lam)
    bits = 0
    size = adds = drops = blocked = 0
    t = 0
    while t < horizon:
        m = min(_RNG_BLOCK, horizon - t)
        vs = rng.integers(0, n, size=m)
        us = rng.random(m)
        for i in range(m):
            t += 1
            v = int(vs[i])
            b = 1 << v
            if bits & b:
                if us[i] >= p_in:
                    bits ^= b
                    size -= 1
                    drops += 1
            elif rows[v] & bits:
                blocked += 1
            elif us[i] < p_in:
                bits |= b
                size += 1
                adds += 1
                if size == target:
                    return RunRecord(
                        True, VertexSet(n, bits), t, adds, drops, blocked, seed
                    )
    return RunRecord(False, None, horizon, adds, drops, blocked, seed)


def greedy_run(g: Graph, s: int, seed: int) -> RunRecord:
    """Iteratively add a uniformly random compatible vertex; FAIL when stuck."""
    n = g.n
    if s > n:
        raise ValueError("target size exceeds vertex count")
    rng = make_rng(seed)
    bits = 0
    cand = full_mask(n)
    order: list[int] = []
    for i in range(s):
        count = cand.bit_count()
        if count == 0:
            return RunRecord(False, None, i, i, 0, 0, seed, tuple(order))
        v = nth_set_bit(cand, int(rng.integers(count)))
        order.append(v)
        bits |= 1 << v
        cand &= ~g.rows[v] & ~(1 << v)
    return RunRecord(True, VertexSet(n, bits), s, s, 0, 0, seed, tuple(order))


def coupled_run(
    g: Graph, s: int, horizon: int, seed: int
) -> tuple[RunRecord, RunRecord, bool]:
    """Shared-randomness execution of Glauber and greedy at fugacity 1.

    Greedy runs first on its own stream, producing insertions v_1..v_s.  The
    Glauber chain runs on a second stream, except that while its trajectory is
    still monotone (it has never dropped a vertex, so its state is exactly
    {v_1..v_i}), an accepted addition installs v_{i+1} instead of the proposed
    vertex.  Conditioned on an addition from that state the proposal is
    uniform over compatible vertices, which is exactly the law of v_{i+1}, so
    both marginals match the standalone samplers.  After the first drop the
    chain continues independently.

    Returns (glauber_record, greedy_record, agreed); ``agreed`` is False
    whenever either side fails.
    """
    n, rows = g.n, g.rows
    greedy_rec = greedy_run(g, s, derive_seed(seed, 0))
    choices = greedy_rec.order or ()
    if s == 0:
        glauber_rec = RunRecord(True, VertexSet.empty(n), 0, 0, 0, 0, seed)
        return glauber_rec, greedy_rec, True
    rng = make_rng(derive_seed(seed, 1))
    bits = 0
    size = adds = drops = blocked = 0
    monotone = True
    level = 0
    t = 0
    glauber_rec = None
    while t < horizon and glauber_rec is None:
        m = min(_RNG_BLOCK, horizon - t)
        vs = rng.integers(0, n, size=m)
        us = rng.random(m)
        for i in range(m):
            t += 1
            v = int(vs[i])
            b = 1 << v
            if bits & b:
                if us[i] >= 0.5:
                    bits ^= b
                    size -= 1
                    drops += 1
                    monotone = False
            elif rows[v] & bits:
                blocked += 1
            elif us[i] < 0.5:
                if monotone:
                    # an addable proposal exists, so greedy cannot have failed
                    # at this level
                    w = choices[level]
                    level += 1
                    bits |= 1 << w
                else:
                    bits |= b
                size += 1
                adds += 1
                if size == s:
                    glauber_rec = RunRecord(
                        True, VertexSet(n, bits), t, adds, drops, blocked, seed
                    )
                    break
    if glauber_rec is None:
        glauber_rec = RunRecord(False, None, horizon, adds, drops, blocked, seed)
    agreed = (
        glauber_rec.success
        and greedy_rec.success
        and glauber_rec.result.bits == greedy_rec.result.bits
    )
    return glauber_rec, greedy_rec, agreed


def _count_completions(g: Graph, cand: int, ell: int, budget: int) -> int:
    """Independent ell-subsets of cand, aborting past ``budget``."""
    if ell == 0:
        return 1
    if ell == 1:
        return cand.bit_count()
    total = 0
    rem = cand
    while rem:
        low = rem & -rem
        rem ^= low
        total += _count_completions(g, rem & ~g.rows[low.bit_length() - 1], ell - 1, budget)
        if total > budget:
            raise BudgetExceededError("completion count over budget", total)
    return total


def extend_uniform(
    g: Graph, s: VertexSet, target_k: int, seed: int, budget: int = EXTENSION_BUDGET
) -> VertexSet | None:
    """Uniformly random independent target_k-superset of s, or None if none exist.

    Enumerates completions exactly (by ranked DFS rather than rejection), so
    the output law is exactly uniform; refuses when the completion count
    exceeds ``budget``.
    """
    if not is_independent(g, s):
        raise ValueError("set is not independent in the graph")
    ell = target_k - s.size
    if ell < 0:
        raise ValueError("target size below current size")
    if ell == 0:
        return s
    cand = compatible_mask(g, s.bits)
    total = _count_completions(g, cand, ell, budget)
    if total > budget:
        raise BudgetExceededError("completion count over budget", total)
    if total == 0:
        return None
    rank = int(make_rng(seed).integers(total))
    bits = s.bits
    while ell > 0:
        rem = cand
        while True:
            low = rem & -rem
            rem ^= low
            v = low.bit_length() - 1
            sub = rem & ~g.rows[v]
            c = _count_completions(g, sub, ell - 1, budget) if ell > 1 else 1
            if rank < c:
                bits |= low
                cand = sub
                ell -= 1
                break
            rank -= c
    return VertexSet(g.n, bits)


@dataclass(frozen=True)
class SamplerSpec:
    """Which sampler to run and at what parameters; horizon None means default."""

    kind: str  # "glauber" or "greedy"
    target_size: int
    horizon: int | None = None
    lam: float = 1.0

    def __post_init__(self):
        if self.kind not in ("glauber", "greedy"):
            raise ValueError(f"unknown sampler kind {self.kind!r}")

    def resolved_horizon(self, n: int) -> int:
        return self.horizon if self.horizon is not None else default_horizon(n, self.target_size)


def run_sampler(g: Graph, spec: SamplerSpec, seed: int) -> RunRecord:
    if spec.kind == "glauber":
        params = GlauberParams(spec.target_size, spec.resolved_horizon(g.n), spec.lam)
        return glauber_run(g, params, seed)
    return greedy_run(g, spec.target_size, seed)


@dataclass
class SampleBatch:
    """Seeded collection of draws from one sampler on one graph."""

    spec: SamplerSpec
    master_seed: int
    graph_hash: str
    records: list[RunRecord]

    def success_sets(self) -> list[VertexSet]:
        return [r.result for r in self.records if r.success]

    def fail_rate(self) -> float:
        if not self.records:
            return 0.0
        return sum(0 if r.success else 1 for r in self.records) / len(self.records)


def _batch_worker(args) -> RunRecord:
    g, spec, seed = args
    return run_sampler(g, spec, seed)


def sample_batch(
    g: Graph,
    spec: SamplerSpec,
    trials: int,
    master_seed: int,
    parallelism: int = 1,
) -> SampleBatch:
    """Trial i uses derive_seed(master_seed, i); output is identical for any
    parallelism degree."""
    seeds = [derive_seed(master_seed, i) for i in range(trials)]
    if parallelism <= 1 or trials < 2:
        records = [run_sampler(g, spec, sd) for sd in seeds]
    else:
        chunk = max(1, trials // (parallelism * 4))
        with ProcessPoolExecutor(max_workers=parallelism) as ex:
            records = list(
                ex.map(_batch_worker, [(g, spec, sd) for sd in seeds], chunksize=chunk)
            )
    return SampleBatch(spec, master_seed, g.graph_hash(), records)


def save_batch(batch: SampleBatch, csv_path) -> None:
    """CSV rows ``trial,seed,outcome,steps,set_bits_hex`` plus a JSON sidecar."""
    with open(csv_path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "seed", "outcome", "steps", "set_bits_hex"])
        for i, rec in enumerate(batch.records):
            w.writerow(
                [
                    i,
                    rec.seed,
                    "SUCCESS" if rec.success else "FAIL",
                    rec.steps_used,
                    rec.result.to_hex() if rec.success else "",
                ]
            )
    sidecar = {
        "graph_hash": batch.graph_hash,
        "master_seed": batch.master_seed,
        "trials": len(batch.records),
        "spec": asdict(batch.spec),
    }
    with open(str(csv_path) + ".json", "w", encoding="ascii") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_batch(csv_path, n: int) -> tuple[list[tuple[int, int, str, int, str]], dict]:
    """Raw rows and sidecar; set bits decodable via VertexSet.from_hex(n, ...)."""
    with open(str(csv_path) + ".json", "r", encoding="ascii") as fh:
        sidecar = json.load(fh)
    rows = []
    with open(csv_path, "r", newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["trial", "seed", "outcome", "steps", "set_bits_hex"]:
            raise ValueError(f"unexpected batch CSV header: {header}")
        for trial, seed, outcome, steps, bits_hex in reader:
            rows.append((int(trial), int(seed), outcome, int(steps), bits_hex))
    return rows, sidecar
