"""Experiment runners behind the CLI: chaos sweep, Glauber sampling pipeline,
Z_k concentration, and greedy uniformity.

Results are CSV files with documented headers plus JSON sidecars carrying the
full config, graph hashes, and artifact version.  Runs are resumable at cell
granularity: each (experiment, n, s-or-k) cell writes its rows to
``cells/<key>.csv`` and is skipped when already marked done in the manifest.
Replaying any run with the same config and master seed reproduces every file
byte-identically; parallelism only distributes per-trial work whose seeds are
pre-derived, so it never changes numeric output.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import HardcoreError, SamplerQualityError
from .graphs import (
    Graph,
    NoiseParams,
    VertexSet,
    compatible_mask,
    expected_zk,
    gen_gnp,
    resample_noise,
)
from .measures import (
    ExactMeasure,
    hardcore_measure,
    k_star,
    mk_ratio_check,
    round_half_up,
    zk_concentration_cutoff,
)
from .oracles import exact_stopped_glauber
from .samplers import (
    GlauberParams,
    SamplerSpec,
    extend_uniform,
    coupled_run,
    glauber_run,
    greedy_run,
)
from .seeding import derive_seed, make_rng
from .transport import chaos_lower_bound, w2_exact
from .zkfast import count_k_independent_sets

log = logging.getLogger("hardcore")

CHAOS_HEADER = [
    "n", "s", "trial", "overlap_bound", "m2_left", "m2_right",
    "w2sq_lower", "stderr", "fail_rate",
]
CHAOS_EXACT_HEADER = CHAOS_HEADER + ["w2sq_exact"]
CHAOS_SUMMARY_HEADER = ["n", "s", "trials", "mean_w2sq_lower", "pooled_se"]
SAMPLING_TRIAL_HEADER = [
    "n", "k", "trial", "outcome", "steps", "set_bits_hex", "extended_k",
    "extended_bits_hex", "coupled_agreed",
]
SAMPLING_SUMMARY_HEADER = [
    "n", "k", "trials", "success_rate", "coupled_agreement", "w2sq_stopped", "w2sq_extended",
]
ZK_HEADER = ["n", "k", "graph_seed", "zk", "expected_zk", "chebyshev_lo", "chebyshev_hi"]
ZK_SUMMARY_HEADER = [
    "n", "k", "seeds", "mean_zk", "expected_zk", "mean_z_score", "var_zk",
    "rel_var", "rel_var_envelope",
]
ZK_RATIOS_HEADER = [
    "n", "k", "forward_ratio", "backward_ratio", "forward_envelope", "backward_envelope",
]
GREEDY_SETS_HEADER = ["n", "k", "set_index", "set_bits_hex", "p_exact"]
GREEDY_SUMMARY_HEADER = ["n", "k", "sets", "distinct_sets", "p_min", "p_max", "ratio"]

_EXACT_W2_MAX_N = 20
_CHEBYSHEV_TAIL = 0.05


@dataclass
class ExperimentConfig:
    """Validated knobs for one experiment run; round-trips through key=value text."""

    experiment: str = ""
    n: int | None = None
    n_sweep: tuple[int, ...] = ()
    p: float = 0.5
    lam: float = 1.0
    s_sweep: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    size_constant: float = 30.0
    window_radius: int = 2
    k: int | None = None
    trials: int = 100
    cert_samples: int = 32
    master_seed: int = 12345
    out_dir: str = "results"
    exact: bool = False
    parallelism: int = 1
    quick: bool = False
    horizon_factor: int = 100
    fail_threshold: float = 0.05
    extend: bool = True
    coupled: bool = False
    force: bool = False

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0,1)")
        for s in self.s_sweep:
            if not 0.0 <= s <= 1.0:
                raise ValueError("each s must lie in [0,1]")
        if self.trials < 0 or self.cert_samples < 0:
            raise ValueError("trial counts must be nonnegative")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.window_radius < 0:
            raise ValueError("window radius must be nonnegative")
        if self.horizon_factor < 1:
            raise ValueError("horizon factor must be >= 1")
        if not 0 < self.fail_threshold <= 1:
            raise ValueError("fail threshold must lie in (0,1]")

    def ns(self) -> tuple[int, ...]:
        if self.n_sweep:
            return self.n_sweep
        if self.n is None:
            raise ValueError("config needs n or n_sweep")
        return (self.n,)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(repr(x) for x in v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        kwargs = {}
        types = {f.name: f for f in dataclasses.fields(cls)}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw!r}")
            key, value = line.split("=", 1)
            key, value = key.strip(), value.strip()
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[key] = _parse_field(key, value)
        return cls(**kwargs)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="ascii")

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text(encoding="ascii"))


def _parse_field(key: str, value: str):
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    ftype = fields[key].type
    if value == "None":
        return None
    if ftype in ("bool",):
        return value in ("True", "true", "1")
    if ftype in ("int",):
        return int(value)
    if ftype in ("float",):
        return float(value)
    if ftype in ("int | None",):
        return int(value)
    if ftype in ("str",):
        return value
    if ftype == "tuple[int, ...]":
        return tuple(int(x) for x in value.split(",")) if value else ()
    if ftype == "tuple[float, ...]":
        return tuple(float(x) for x in value.split(",")) if value else ()
    raise ValueError(f"unhandled config field type {ftype} for {key}")


def resolve_k(cfg: ExperimentConfig, n: int) -> int:
    """Sampler target size: explicit k, else round(log2 n - C loglog2 n).

    The size constant defaults to the strictest analysis value; it is clamped
    below 7, warned below 21, and when the formula is nonpositive at desk
    scale the concentration point k* is used instead.
    """
    if cfg.k is not None:
        return cfg.k
    c_const = cfg.size_constant
    if c_const < 7:
        log.warning("size constant %.1f below 7; clamping to 7", c_const)
        c_const = 7.0
    elif c_const < 21:
        log.warning(
            "size constant %.1f is below 21; only the weaker coupling analyses apply",
            c_const,
        )
    kf = round_half_up(math.log2(n) - c_const * math.log2(math.log2(n)))
    if kf < 1:
        ks = k_star(n)
        log.warning(
            "target-size formula gives %d at n=%d; falling back to k*=%d",
            kf, n, ks,
        )
        return ks
    return kf


# ---------------------------------------------------------------------------
# resumable store
# ---------------------------------------------------------------------------


class ExperimentStore:
    """Cell-granular result store with a manifest for resumption."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out_dir)
        self.cells = self.dir / "cells"
        self.cells.mkdir(parents=True, exist_ok=True)
        self.config_hash = hashlib.sha256(cfg.to_text().encode()).hexdigest()
        self.manifest_path = self.dir / "manifest.json"
        if self.manifest_path.exists():
            self.manifest = json.loads(self.manifest_path.read_text())
            if self.manifest.get("config_hash") != self.config_hash:
                raise HardcoreError(
                    f"output dir {self.dir} holds results for a different config; "
                    "use a fresh --out"
                )
        else:
            self.manifest = {
                "experiment": cfg.experiment,
                "config_hash": self.config_hash,
                "cells": {},
            }
        cfg.save(self.dir / "config.cfg")

    def _flush(self):
        self.manifest_path.write_text(json.dumps(self.manifest, indent=2, sort_keys=True))

    def run_cell(self, key: str, header: list[str], fn):
        """Rows for ``key``: cached when done, else computed, written, marked.

        ``fn`` returns a list of row lists; a SamplerQualityError marks the
        cell aborted and yields no rows (the run continues).
        """
        status = self.manifest["cells"].get(key)
        path = self.cells / f"{key}.csv"
        if status == "done" and path.exists():
            with open(path, newline="", encoding="ascii") as fh:
                reader = csv.reader(fh)
                got = next(reader)
                if got != header:
                    raise HardcoreError(f"cell {key} header drifted: {got}")
                return [row for row in reader]
        if status == "aborted":
            return []
        try:
            rows = fn()
        except SamplerQualityError as exc:
            log.warning("cell %s aborted: %s", key, exc)
            self.manifest["cells"][key] = "aborted"
            (self.cells / f"{key}.ABORTED").write_text(str(exc) + "\n")
            self._flush()
            return []
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        self.manifest["cells"][key] = "done"
        self._flush()
        return [[str(x) for x in row] for row in rows]

    def write_final(self, name: str, header: list[str], rows, extra_sidecar: dict | None = None):
        path = self.dir / name
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        sidecar = {
            "artifact_version": __version__,
            "experiment": self.cfg.experiment,
            "config": self.cfg.to_text(),
            "config_hash": self.config_hash,
        }
        if extra_sidecar:
            sidecar.update(extra_sidecar)
        with open(str(path) + ".json", "w", encoding="ascii") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# chaos experiment
# ---------------------------------------------------------------------------


def _chaos_trial(args):
    (n, p, s, k, horizon, cert_samples, fail_threshold, pair_seed, exact) = args
    g = gen_gnp(n, p, derive_seed(pair_seed, 0))
    gp = resample_noise(g, NoiseParams(s, p), derive_seed(pair_seed, 1))
    if exact:
        cert = chaos_lower_bound(g, gp, None, 0, None, exact=True, noise_s=s)
        v, _ = w2_exact(hardcore_measure(g), hardcore_measure(gp))
        return cert, v * v
    spec = SamplerSpec("glauber", k, horizon)
    cert = chaos_lower_bound(
        g, gp, spec, cert_samples, derive_seed(pair_seed, 2),
        noise_s=s, fail_threshold=fail_threshold,
    )
    return cert, None


def cmd_chaos(cfg: ExperimentConfig) -> Path:
    """Chaos sweep: per (n, s, trial) one graph pair and one certificate row."""
    store = ExperimentStore(cfg)
    exact_mode = cfg.exact
    header = CHAOS_EXACT_HEADER if exact_mode else CHAOS_HEADER
    all_rows = []
    summary_rows = []
    for n in cfg.ns():
        if exact_mode and n > 12:
            raise HardcoreError("exact chaos rows require n <= 12")
        k = resolve_k(cfg, n)
        horizon = cfg.horizon_factor * (2**k) * math.ceil(math.log2(n))
        for si, s in enumerate(cfg.s_sweep):
            def cell_fn(n=n, s=s, si=si, k=k, horizon=horizon):
                jobs = [
                    (
                        n, cfg.p, s, k, horizon, cfg.cert_samples,
                        cfg.fail_threshold,
                        derive_seed(cfg.master_seed, 101, n, si, t),
                        exact_mode,
                    )
                    for t in range(cfg.trials)
                ]
                if cfg.parallelism > 1 and len(jobs) > 1:
                    with ProcessPoolExecutor(max_workers=cfg.parallelism) as ex:
                        results = list(ex.map(_chaos_trial, jobs, chunksize=4))
                else:
                    results = [_chaos_trial(j) for j in jobs]
                rows = []
                for t, (cert, w2sq_exact) in enumerate(results):
                    row = [
                        n, _fmt(float(s)), t,
                        _fmt(cert.overlap_bound), _fmt(cert.m2_left), _fmt(cert.m2_right),
                        _fmt(cert.w2sq_lower), _fmt(cert.stderr_w2sq),
                        _fmt(max(cert.fail_rate_left, cert.fail_rate_right)),
                    ]
                    if exact_mode:
                        row.append(_fmt(w2sq_exact))
                    rows.append(row)
                return rows

            rows = store.run_cell(f"chaos_n{n}_s{si}", header, cell_fn)
            all_rows.extend(rows)
            if rows:
                vals = [float(r[6]) for r in rows]
                mean = sum(vals) / len(vals)
                if len(vals) > 1:
                    var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
                    pooled = math.sqrt(var / len(vals))
                else:
                    pooled = 0.0
                summary_rows.append([n, _fmt(float(s)), len(vals), _fmt(mean), _fmt(pooled)])
    store.write_final("chaos_summary.csv", CHAOS_SUMMARY_HEADER, summary_rows)
    return store.write_final("chaos.csv", header, all_rows)


# ---------------------------------------------------------------------------
# glauber sampling pipeline
# ---------------------------------------------------------------------------


def _estimated_size_profile(n: int) -> list[tuple[int, float]]:
    """Size profile (k, weight) from the expected counts M_k; used when the
    exact profile is out of reach.

    Truncates where M_k falls 2^-40 below its peak (the concentration-cutoff
    formula sits below k* at desk scale, so it cannot serve as the cap).
    """
    from .graphs import expected_zk_log2

    peak = max(expected_zk_log2(n, k) for k in range(0, n + 1))
    weights = []
    for k in range(0, n + 1):
        l2 = expected_zk_log2(n, k)
        if weights and l2 < peak - 40:
            break
        weights.append((k, 2.0 ** (l2 - peak)))
    total = sum(w for _, w in weights)
    return [(k, w / total) for k, w in weights if w > 0]


def _draw_size(profile: list[tuple[int, float]], rng) -> int:
    u = rng.random()
    acc = 0.0
    for k, w in profile:
        acc += float(w)
        if u < acc:
            return k
    return profile[-1][0]


def _canonical_set_of_size(g: Graph, size: int) -> VertexSet | None:
    """Lexicographically smallest independent set of the given size, if any."""

    def rec(bits: int, cand: int, need: int):
        if need == 0:
            return bits
        rem = cand
        while rem:
            low = rem & -rem
            rem ^= low
            got = rec(bits | low, rem & ~g.rows[low.bit_length() - 1], need - 1)
            if got is not None:
                return got
        return None

    from .graphs import full_mask

    bits = rec(0, full_mask(g.n), size)
    return None if bits is None else VertexSet(g.n, bits)


def _sampling_trial(args):
    (g, k, horizon, do_extend, do_coupled, profile, trial_seed) = args
    rec = glauber_run(g, GlauberParams(k, horizon), derive_seed(trial_seed, 0))
    ext_k = ""
    ext_hex = ""
    if rec.success and do_extend:
        rng = make_rng(derive_seed(trial_seed, 1))
        k_plus = _draw_size(profile, rng)
        ext = None
        if k_plus >= k:
            ext = extend_uniform(g, rec.result, k_plus, derive_seed(trial_seed, 2))
        if ext is None:
            ext = _canonical_set_of_size(g, k_plus)
        if ext is not None:
            ext_k = k_plus
            ext_hex = ext.to_hex()
    agreed = ""
    if do_coupled:
        _, _, ag = coupled_run(g, k, horizon, derive_seed(trial_seed, 3))
        agreed = "1" if ag else "0"
    return rec, ext_k, ext_hex, agreed


def _exact_extended_law(g: Graph, stopped, mu: ExactMeasure) -> ExactMeasure:
    """Exact law of the extension step applied to the stopped-chain output."""
    size_marg = mu.size_marginal()
    base = stopped.as_success_measure()
    acc: dict[int, float] = {}

    def add(bits: int, w: float):
        acc[bits] = acc.get(bits, 0.0) + w

    for vs, p in base.items():
        for k_plus, q in size_marg.items():
            w = float(p) * float(q)
            if w == 0:
                continue
            if k_plus >= vs.size:
                cand = compatible_mask(g, vs.bits)
                comps = _enumerate_completions(g, cand, k_plus - vs.size)
                if comps:
                    share = w / len(comps)
                    for extra in comps:
                        add(vs.bits | extra, share)
                    continue
            fallback = _canonical_set_of_size(g, k_plus)
            add(fallback.bits, w)
    support = [VertexSet(g.n, bits) for bits in acc]
    total = sum(acc.values())
    return ExactMeasure(support, [acc[vs.bits] / total for vs in support])


def _enumerate_completions(g: Graph, cand: int, ell: int) -> list[int]:
    if ell == 0:
        return [0]
    out = []

    def rec(chosen: int, c: int, need: int):
        if need == 0:
            out.append(chosen)
            return
        rem = c
        while rem:
            low = rem & -rem
            rem ^= low
            rec(chosen | low, rem & ~g.rows[low.bit_length() - 1], need - 1)

    rec(0, cand, ell)
    return out


def cmd_glauber_sample(cfg: ExperimentConfig) -> Path:
    """Sampling pipeline: stopped Glauber to size k, optional uniform extension
    to a size drawn from the size profile; exact W2 columns at oracle scale."""
    store = ExperimentStore(cfg)
    all_rows = []
    summary_rows = []
    for n in cfg.ns():
        k = resolve_k(cfg, n)
        horizon = cfg.horizon_factor * (2**k) * math.ceil(math.log2(n))
        g = gen_gnp(n, cfg.p, derive_seed(cfg.master_seed, 201, n))
        mu = None
        if cfg.exact:
            if n > _EXACT_W2_MAX_N:
                raise HardcoreError(f"exact W2 columns require n <= {_EXACT_W2_MAX_N}")
            mu = hardcore_measure(g)
            profile = sorted(
                (kk, float(w)) for kk, w in mu.size_marginal().items()
            )
        else:
            profile = _estimated_size_profile(n)

        def cell_fn(n=n, k=k, horizon=horizon, g=g, profile=profile):
            jobs = [
                (
                    g, k, horizon, cfg.extend, cfg.coupled, profile,
                    derive_seed(cfg.master_seed, 202, n, t),
                )
                for t in range(cfg.trials)
            ]
            if cfg.parallelism > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=cfg.parallelism) as ex:
                    results = list(ex.map(_sampling_trial, jobs, chunksize=8))
            else:
                results = [_sampling_trial(j) for j in jobs]
            rows = []
            for t, (rec, ext_k, ext_hex, agreed) in enumerate(results):
                rows.append(
                    [
                        n, k, t,
                        "SUCCESS" if rec.success else "FAIL",
                        rec.steps_used,
                        rec.result.to_hex() if rec.success else "",
                        ext_k, ext_hex, agreed,
                    ]
                )
            return rows

        rows = store.run_cell(f"sampling_n{n}", SAMPLING_TRIAL_HEADER, cell_fn)
        all_rows.extend(rows)
        if not rows:
            continue
        successes = sum(1 for r in rows if r[3] == "SUCCESS")
        success_rate = successes / len(rows)
        agreement = ""
        if cfg.coupled:
            flags = [r[8] for r in rows if r[8] != ""]
            if flags:
                agreement = _fmt(sum(1 for f in flags if f == "1") / len(flags))
        w2_stopped = ""
        w2_extended = ""
        if cfg.exact:
            stopped = exact_stopped_glauber(g, k, horizon)
            v, _ = w2_exact(stopped.as_success_measure(), mu)
            w2_stopped = _fmt(v * v)
            extended = _exact_extended_law(g, stopped, mu)
            v, _ = w2_exact(extended, mu)
            w2_extended = _fmt(v * v)
        summary_rows.append(
            [n, k, len(rows), _fmt(success_rate), agreement, w2_stopped, w2_extended]
        )
    store.write_final("sampling_summary.csv", SAMPLING_SUMMARY_HEADER, summary_rows)
    return store.write_final("sampling.csv", SAMPLING_TRIAL_HEADER, all_rows)


# ---------------------------------------------------------------------------
# Z_k concentration
# ---------------------------------------------------------------------------


def _zk_trial(args):
    n, p, k, seed = args
    return count_k_independent_sets(gen_gnp(n, p, seed), k)


def cmd_zk(cfg: ExperimentConfig) -> Path:
    """Exact Z_k across graph seeds, with expected-count and variance envelopes."""
    if cfg.k is None:
        raise HardcoreError("zk experiment needs an explicit k")
    store = ExperimentStore(cfg)
    k = cfg.k
    all_rows = []
    summary_rows = []
    ratio_rows = []
    for n in cfg.ns():
        mk = float(expected_zk(n, k))
        rel_var_env = 100.0 * k**5 / n**2
        eps95 = math.sqrt(rel_var_env / _CHEBYSHEV_TAIL)
        lo, hi = mk * (1 - eps95), mk * (1 + eps95)

        def cell_fn(n=n, mk=mk, lo=lo, hi=hi):
            jobs = [
                (n, cfg.p, k, derive_seed(cfg.master_seed, 301, n, k, i))
                for i in range(cfg.trials)
            ]
            if cfg.parallelism > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=cfg.parallelism) as ex:
                    counts = list(ex.map(_zk_trial, jobs, chunksize=4))
            else:
                counts = [_zk_trial(j) for j in jobs]
            return [
                [n, k, i, c, _fmt(mk), _fmt(lo), _fmt(hi)]
                for i, c in enumerate(counts)
            ]

        rows = store.run_cell(f"zk_n{n}_k{k}", ZK_HEADER, cell_fn)
        all_rows.extend(rows)
        if rows:
            vals = [float(r[3]) for r in rows]
            mean = sum(vals) / len(vals)
            var = (
                sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
                if len(vals) > 1
                else 0.0
            )
            se = math.sqrt(var / len(vals)) if len(vals) > 1 else float("inf")
            zscore = (mean - mk) / se if se > 0 else 0.0
            summary_rows.append(
                [
                    n, k, len(vals), _fmt(mean), _fmt(mk), _fmt(zscore),
                    _fmt(var), _fmt(var / mk**2), _fmt(rel_var_env),
                ]
            )
        ks = k_star(n)
        kmax = max(1, math.floor(zk_concentration_cutoff(n)))
        for kk in range(1, min(n, kmax) + 1):
            fwd, bwd = mk_ratio_check(n, kk)
            cap = kk - ks
            ratio_rows.append(
                [
                    n, kk, _fmt(fwd), _fmt(bwd),
                    _fmt(2.0 ** (-cap)), _fmt(2.0 ** (-(cap + 1))),
                ]
            )
    store.write_final("zk_summary.csv", ZK_SUMMARY_HEADER, summary_rows)
    store.write_final("zk_ratios.csv", ZK_RATIOS_HEADER, ratio_rows)
    return store.write_final("zk.csv", ZK_HEADER, all_rows)


# ---------------------------------------------------------------------------
# greedy uniformity
# ---------------------------------------------------------------------------


def exact_greedy_set_probability(g: Graph, vs: VertexSet) -> Fraction:
    """P[greedy outputs vs]: sum over insertion orders of prod 1/updeg(prefix).

    Up-degrees are memoized per prefix subset, so the cost is 2^|S| mask
    evaluations plus |S|! products.
    """
    members = list(vs.members())
    kk = len(members)
    updeg_memo: dict[int, int] = {}

    def updeg_of(bits: int) -> int:
        got = updeg_memo.get(bits)
        if got is None:
            got = compatible_mask(g, bits).bit_count()
            updeg_memo[bits] = got
        return got

    from itertools import permutations

    total = Fraction(0)
    for perm in permutations(members):
        prod = Fraction(1)
        bits = 0
        ok = True
        for v in perm:
            d = updeg_of(bits)
            if d == 0:
                ok = False
                break
            prod /= d
            bits |= 1 << v
        if ok:
            total += prod
    return total


def cmd_greedy_uniformity(cfg: ExperimentConfig) -> Path:
    """Sample sets by greedy, compute each exact output probability, report the
    max/min ratio per n."""
    if cfg.k is None:
        raise HardcoreError("greedy-uniformity needs an explicit k")
    if cfg.k > 9 and not cfg.force:
        raise HardcoreError(
            f"k={cfg.k} needs {math.factorial(cfg.k)} permutations per set; "
            "pass force=True to override"
        )
    store = ExperimentStore(cfg)
    k = cfg.k
    set_rows = []
    summary_rows = []
    for n in cfg.ns():
        g = gen_gnp(n, cfg.p, derive_seed(cfg.master_seed, 401, n))

        def cell_fn(n=n, g=g):
            rows = []
            for i in range(cfg.trials):
                rec = greedy_run(g, k, derive_seed(cfg.master_seed, 402, n, i))
                if not rec.success:
                    continue
                p_exact = exact_greedy_set_probability(g, rec.result)
                rows.append([n, k, i, rec.result.to_hex(), _fmt(float(p_exact))])
            return rows

        rows = store.run_cell(f"greedy_n{n}_k{k}", GREEDY_SETS_HEADER, cell_fn)
        set_rows.extend(rows)
        if rows:
            by_set = {}
            for r in rows:
                by_set[r[3]] = float(r[4])
            pmin = min(by_set.values())
            pmax = max(by_set.values())
            summary_rows.append(
                [n, k, len(rows), len(by_set), _fmt(pmin), _fmt(pmax), _fmt(pmax / pmin)]
            )
    store.write_final("greedy_uniformity.csv", GREEDY_SUMMARY_HEADER, summary_rows)
    return store.write_final("greedy_sets.csv", GREEDY_SETS_HEADER, set_rows)
