#!/usr/bin/env python3
"""Chaos curve: mean W2^2 lower bound vs resample probability, one curve per n,
with error bars and the limiting reference line at 2."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from plotlib import CHAOS_SUMMARY_HEADER, load_rows, make_parser, save


def main() -> None:
    args = make_parser(__doc__).parse_args()
    rows = load_rows(args.inp, CHAOS_SUMMARY_HEADER)
    by_n: dict[int, list[tuple[float, float, float]]] = {}
    for r in rows:
        by_n.setdefault(int(r["n"]), []).append(
            (float(r["s"]), float(r["mean_w2sq_lower"]), float(r["pooled_se"]))
        )
    fig, ax = plt.subplots(figsize=(6, 4))
    for n in sorted(by_n):
        pts = sorted(by_n[n])
        ax.errorbar(
            [p[0] for p in pts],
            [p[1] for p in pts],
            yerr=[p[2] for p in pts],
            marker="o",
            capsize=3,
            label=f"n = {n}",
        )
    ax.axhline(2.0, color="gray", linestyle="--", linewidth=1, label="limit 2")
    ax.set_xlabel("edge resample probability s")
    ax.set_ylabel(r"mean $W_2^2$ lower bound")
    ax.set_title("Transport disorder chaos under edge resampling")
    ax.legend()
    ax.set_ylim(bottom=-0.05)
    fig.tight_layout()
    save(fig, args.out)


if __name__ == "__main__":
    main()
