"""Shared CSV loading and schema guards for the batch plot scripts.

The scripts render exactly what the CSVs contain: no statistic is recomputed
here, so the experiment runner stays the single source of numeric truth.
"""

from __future__ import annotations

import argparse
import csv
import sys

SCHEMA_EXIT = 2
EMPTY_EXIT = 1

CHAOS_SUMMARY_HEADER = ["n", "s", "trials", "mean_w2sq_lower", "pooled_se"]
ZK_HEADER = ["n", "k", "graph_seed", "zk", "expected_zk", "chebyshev_lo", "chebyshev_hi"]
SAMPLING_SUMMARY_HEADER = [
    "n", "k", "trials", "success_rate", "coupled_agreement", "w2sq_stopped", "w2sq_extended",
]


def fail(code: int, message: str) -> None:
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(code)


def load_rows(path: str, expected_header: list[str]) -> list[dict]:
    """Rows of a results CSV; refuses files whose header does not match."""
    try:
        with open(path, newline="", encoding="ascii") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                fail(SCHEMA_EXIT, f"{path}: no header row")
            if header != expected_header:
                fail(
                    SCHEMA_EXIT,
                    f"{path}: header {header} does not match the documented "
                    f"schema {expected_header}",
                )
            rows = [dict(zip(expected_header, row)) for row in reader]
    except OSError as exc:
        fail(SCHEMA_EXIT, str(exc))
    if not rows:
        fail(EMPTY_EXIT, f"{path}: no data rows, refusing to draw an empty figure")
    return rows


def make_parser(description: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--in", dest="inp", required=True, help="input results CSV")
    ap.add_argument("--out", dest="out", required=True, help="output image path")
    return ap


def save(fig, out: str) -> None:
    # fixed metadata keeps output bytes deterministic for identical inputs
    fig.savefig(out, dpi=120, metadata={"Software": "hardcore-plots"})
    print(f"wrote {out}")
