#!/usr/bin/env python3
"""Render a connectivity threshold curve from a sweep CSV.

    cagraph sweep --n 10000 --law law.json --c -3,-2,-1,0,1,2,3 \
        --reps 2000 --seed 1 --out sweep.csv
    python scripts/plot_threshold.py sweep.csv --out sweep.png
"""

import argparse
import csv
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_path")
    parser.add_argument("--out", default="threshold.png")
    args = parser.parse_args()

    with open(args.csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SystemExit("empty sweep file")

    c = np.array([float(r["c"]) for r in rows])
    p_hat = np.array([float(r["p_hat"]) for r in rows])
    lo = np.array([float(r["ci_low"]) for r in rows])
    hi = np.array([float(r["ci_high"]) for r in rows])

    grid = np.linspace(c.min() - 0.5, c.max() + 0.5, 400)
    limit = np.exp(-np.exp(grid))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(grid, limit, color="gray", lw=1.5, label=r"$\exp(-e^{c})$ limit")
    ax.errorbar(
        c, p_hat, yerr=[p_hat - lo, hi - p_hat],
        fmt="o", capsize=3, color="tab:blue", label="estimate (95% Wilson)",
    )
    n = rows[0]["n"]
    reps = rows[0]["replicates"]
    ax.set_xlabel("threshold coordinate c")
    ax.set_ylabel("P(connected)")
    ax.set_title(f"Connectivity across the threshold (n={n}, {reps} replicates)")
    ax.set_ylim(-0.03, 1.03)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
