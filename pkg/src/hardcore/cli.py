"""Command-line experiment runner.

Subcommands: gen, chaos, glauber-sample, zk, greedy-uniformity, verify.
Exit codes: 0 pass, 1 property failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import BudgetExceededError, HardcoreError
from .experiments import (
    ExperimentConfig,
    cmd_chaos,
    cmd_glauber_sample,
    cmd_greedy_uniformity,
    cmd_zk,
)
from .graphs import gen_gnp, save_graph
from .verification import run_checks

log = logging.getLogger("hardcore")

# the strictest analysis constants: size constant 30, horizon factor 100
_HEADLINE_PRESET = {"size_constant": 30.0, "horizon_factor": 100}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, help="key=value config file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", type=str, help="output directory")
    p.add_argument("--trials", type=int, help="trials per cell")
    p.add_argument("--exact", action="store_true", default=None,
                   help="exact oracle-scale columns")
    p.add_argument("--parallelism", type=int, help="worker processes per cell")
    p.add_argument("--n", type=int, help="single vertex count")
    p.add_argument("--n-sweep", type=str, help="comma-separated vertex counts")
    p.add_argument("--k", type=int, help="explicit sampler target size")
    p.add_argument("--p", type=float, help="edge density")
    p.add_argument("--preset-headline", action="store_true",
                   help="use the strictest published constants (C=30, factor 100)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hardcore",
        description="Sampling and transport-distance experiments for the "
        "hardcore model on dense random graphs",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a G(n,p) graph file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=str, required=True, help="graph file path")

    c = sub.add_parser("chaos", help="noise sweep with W2^2 lower-bound certificates")
    _add_common(c)
    c.add_argument("--s-sweep", type=str, help="comma-separated resample probabilities")
    c.add_argument("--cert-samples", type=int, help="sampler draws per certificate")

    s = sub.add_parser("glauber-sample", help="stopped-Glauber sampling pipeline")
    _add_common(s)
    s.add_argument("--no-extend", action="store_true", help="skip the extension step")
    s.add_argument("--coupled", action="store_true", default=None,
                   help="also measure coupled-run agreement")

    z = sub.add_parser("zk", help="Z_k concentration study")
    _add_common(z)

    u = sub.add_parser("greedy-uniformity", help="exact greedy output probabilities")
    _add_common(u)
    u.add_argument("--force", action="store_true", default=None,
                   help="allow k > 9 despite the factorial cost")

    v = sub.add_parser("verify", help="run the oracle/property suite")
    v.add_argument("--quick", action="store_true", help="fast subset (< 1 min)")
    v.add_argument("--seed", type=int, default=12345)
    v.add_argument("--out", type=str, help="directory for verify.json")
    v.add_argument("--only", type=str, help="comma-separated check names")
    return ap


def _merge_config(args, experiment: str) -> ExperimentConfig:
    if getattr(args, "config", None):
        cfg = ExperimentConfig.load(args.config)
    else:
        cfg = ExperimentConfig()
    updates: dict = {"experiment": experiment}
    mapping = [
        ("seed", "master_seed"),
        ("out", "out_dir"),
        ("trials", "trials"),
        ("exact", "exact"),
        ("parallelism", "parallelism"),
        ("n", "n"),
        ("k", "k"),
        ("p", "p"),
        ("cert_samples", "cert_samples"),
        ("coupled", "coupled"),
        ("force", "force"),
    ]
    for arg_name, field in mapping:
        val = getattr(args, arg_name, None)
        if val is not None:
            updates[field] = val
    if getattr(args, "n_sweep", None):
        updates["n_sweep"] = tuple(int(x) for x in args.n_sweep.split(","))
    if getattr(args, "s_sweep", None):
        updates["s_sweep"] = tuple(float(x) for x in args.s_sweep.split(","))
    if getattr(args, "no_extend", False):
        updates["extend"] = False
    if getattr(args, "preset_headline", False):
        updates.update(_HEADLINE_PRESET)
    import dataclasses

    return dataclasses.replace(cfg, **updates)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "gen":
            g = gen_gnp(args.n, args.p, args.seed)
            save_graph(g, args.out)
            print(f"wrote {args.out}: n={g.n} edges={g.edge_count()} hash={g.graph_hash()}")
            return 0
        if args.command == "verify":
            only = args.only.split(",") if args.only else None
            results = run_checks(args.seed, quick=args.quick, only=only)
            all_ok = True
            for r in results:
                status = "PASS" if r.verdict else "FAIL"
                print(f"[{status}] {r.check_name} ({r.seconds:.1f}s): {r.details}")
                all_ok = all_ok and r.verdict
            if args.out:
                outdir = Path(args.out)
                outdir.mkdir(parents=True, exist_ok=True)
                payload = "[" + ",\n".join(r.to_json() for r in results) + "]\n"
                (outdir / "verify.json").write_text(payload)
            return 0 if all_ok else 1
        runner = {
            "chaos": cmd_chaos,
            "glauber-sample": cmd_glauber_sample,
            "zk": cmd_zk,
            "greedy-uniformity": cmd_greedy_uniformity,
        }[args.command]
        cfg = _merge_config(args, args.command)
        path = runner(cfg)
        print(f"wrote {path}")
        return 0
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (HardcoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ValueError) else 1
    except KeyboardInterrupt:
        print("interrupted (resume with the same --out)", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
