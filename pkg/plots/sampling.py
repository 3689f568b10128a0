#!/usr/bin/env python3
"""Sampling pipeline figure: exact W2 vs n where the oracle columns are
present, plus success rate vs n for the large-scale rows."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from plotlib import SAMPLING_SUMMARY_HEADER, load_rows, make_parser, save


def main() -> None:
    args = make_parser(__doc__).parse_args()
    rows = load_rows(args.inp, SAMPLING_SUMMARY_HEADER)
    oracle = [r for r in rows if r["w2sq_extended"] != ""]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    if oracle:
        ns = [int(r["n"]) for r in oracle]
        ax1.plot(
            ns,
            [math.sqrt(float(r["w2sq_stopped"])) for r in oracle],
            marker="o",
            label="stopped chain",
        )
        ax1.plot(
            ns,
            [math.sqrt(float(r["w2sq_extended"])) for r in oracle],
            marker="s",
            label="with extension step",
        )
        ax1.set_xlabel("n")
        ax1.set_ylabel(r"exact $W_2$ to the hardcore law")
        ax1.set_title("Oracle-scale transport distance")
        ax1.legend()
        ax1.set_ylim(bottom=0)
    else:
        ax1.set_title("no oracle-scale rows")
        ax1.axis("off")
    ns = [int(r["n"]) for r in rows]
    ax2.plot(ns, [float(r["success_rate"]) for r in rows], marker="o", label="success")
    agreed = [(int(r["n"]), float(r["coupled_agreement"])) for r in rows
              if r["coupled_agreement"] != ""]
    if agreed:
        ax2.plot(
            [a[0] for a in agreed],
            [a[1] for a in agreed],
            marker="s",
            label="coupling agreement",
        )
    ax2.axhline(0.99, color="gray", linestyle="--", linewidth=1)
    ax2.set_xscale("log", base=2)
    ax2.set_xlabel("n")
    ax2.set_ylabel("rate")
    ax2.set_ylim(0, 1.05)
    ax2.set_title("Stopped-chain success rate")
    ax2.legend()
    fig.tight_layout()
    save(fig, args.out)


if __name__ == "__main__":
    main()
