#!/usr/bin/env python3
"""Plot convergence curves from robustfw trace CSVs.

Each input file becomes one curve of the running-best objective against
cumulative oracle calls (or wall time with --x elapsed). Dual bounds are
drawn dashed when a trace carries them.

    python3 docs/plot_traces.py results/*.csv --out convergence.png
"""

import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load_trace(path):
    rows = []
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            rows.append(row)
    if not rows:
        raise SystemExit(f"{path}: empty trace")
    return rows


def series(rows, x_field):
    xs, best, duals = [], [], []
    running = float("inf")
    for row in rows:
        xs.append(float(row[x_field]))
        running = min(running, float(row["f_value"]))
        best.append(running)
        duals.append(float(row["dual_bound"]) if row["dual_bound"] else None)
    return xs, best, duals


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("traces", nargs="+", help="trace CSV files")
    parser.add_argument("--out", default="convergence.png", help="output image path")
    parser.add_argument(
        "--x",
        choices=["lmo_calls", "iteration", "elapsed_seconds"],
        default="lmo_calls",
        help="x axis column",
    )
    parser.add_argument("--logy", action="store_true", help="log-scale objective axis")
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in args.traces:
        rows = load_trace(path)
        xs, best, duals = series(rows, args.x)
        label = pathlib.Path(path).stem
        (line,) = ax.plot(xs, best, label=label)
        bound_pts = [(x, d) for x, d in zip(xs, duals) if d is not None]
        if bound_pts:
            bx, bd = zip(*bound_pts)
            ax.plot(bx, bd, linestyle="--", color=line.get_color(), alpha=0.6)

    ax.set_xlabel(args.x.replace("_", " "))
    ax.set_ylabel("objective (running best; dashed = dual bound)")
    if args.logy:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
