#!/usr/bin/env python3
"""Render figures from vvsim run CSVs (and sweep summaries)."""

import argparse
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def load_run(path):
    df = pd.read_csv(path, skipinitialspace=True)
    df.name = pathlib.Path(path).stem
    return df


def plot_runs(runs, axis, ax):
    for df in runs:
        x = df["cum_updates"] if axis == "updates" else df["step"]
        ax.semilogy(x, df["mismatch_l2"], label=df.name)
        lo = (df["mismatch_l2"] - df["mismatch_std"]).clip(lower=1e-300)
        ax.fill_between(x, lo, df["mismatch_l2"] + df["mismatch_std"], alpha=0.2)
    ax.set_xlabel("cumulative updates" if axis == "updates" else "step")
    ax.set_ylabel("voltage mismatch (L2)")
    ax.legend()


def plot_tracking(runs, ax):
    for df in runs:
        ax.semilogy(df["step"], df["tracking_err_weighted"], label=df.name)
        if (df["bound"] > 0).any():
            ax.semilogy(df["step"], df["bound"], "--", label=df.name + " bound")
    ax.set_xlabel("step")
    ax.set_ylabel("weighted tracking error")
    ax.legend()


def plot_sweep(path, ax):
    df = pd.read_csv(path, skipinitialspace=True)
    ax.loglog(df["param_value"], df["steady_state_mismatch"], "o-",
              label="steady mismatch")
    ax.loglog(df["param_value"], df["steady_state_tracking"], "s-",
              label="steady tracking")
    ax.set_xlabel("swept parameter")
    ax.legend()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", help="run CSVs, or one sweep_summary.csv")
    ap.add_argument("--axis", choices=["step", "updates"], default="step",
                    help="x axis for the mismatch panel")
    ap.add_argument("--sweep", action="store_true",
                    help="treat the input as a sweep summary")
    ap.add_argument("--out", default="results.png")
    args = ap.parse_args()

    if args.sweep:
        fig, ax = plt.subplots(figsize=(5, 4))
        plot_sweep(args.csv[0], ax)
    else:
        runs = [load_run(p) for p in args.csv]
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
        plot_runs(runs, args.axis, ax1)
        plot_tracking(runs, ax2)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
