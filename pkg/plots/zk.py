#!/usr/bin/env python3
"""Z_k scatter per graph seed against the expected count M_k and the
Chebyshev envelope columns emitted by the zk experiment."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from plotlib import ZK_HEADER, load_rows, make_parser, save


def main() -> None:
    args = make_parser(__doc__).parse_args()
    rows = load_rows(args.inp, ZK_HEADER)
    by_n: dict[int, list[dict]] = {}
    for r in rows:
        by_n.setdefault(int(r["n"]), []).append(r)
    k = int(rows[0]["k"])
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = sorted(by_n)
    for n in ns:
        grp = by_n[n]
        ax.scatter(
            [n] * len(grp),
            [float(r["zk"]) for r in grp],
            s=6,
            alpha=0.25,
            color="tab:blue",
        )
    ax.plot(
        ns,
        [float(by_n[n][0]["expected_zk"]) for n in ns],
        color="tab:red",
        marker="D",
        label=r"expected count $M_k$",
    )
    ax.fill_between(
        ns,
        [max(float(by_n[n][0]["chebyshev_lo"]), 1e-300) for n in ns],
        [float(by_n[n][0]["chebyshev_hi"]) for n in ns],
        color="tab:red",
        alpha=0.12,
        label="Chebyshev envelope (95%)",
    )
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel(f"number of independent {k}-sets")
    ax.set_title(f"Concentration of Z_{k} across graph draws")
    ax.legend()
    fig.tight_layout()
    save(fig, args.out)


if __name__ == "__main__":
    main()
