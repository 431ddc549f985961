"""CSV and PNG artifacts behind the CLI --report option."""

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _ensure_dir(out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)


def save_cycle_report(cycle, out_dir: str) -> dict:
    """Write the principal cycle as cycle.csv plus a distance plot."""
    _ensure_dir(out_dir)
    csv_path = os.path.join(out_dir, "cycle.csv")
    png_path = os.path.join(out_dir, "cycle.png")
    deltas = [e.delta.to_float() for e in cycle.entries]
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["position", "a", "b", "delta"])
        for e in cycle.entries:
            w.writerow([e.position, e.ideal.a, e.ideal.b,
                        f"{e.delta.to_float():.15g}"])
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.step(range(len(deltas)), deltas, where="post")
    ax.set_xlabel("cycle position")
    ax.set_ylabel("distance from the ring")
    ax.set_title(f"principal cycle, d = {cycle.ctx.d} "
                 f"(length {len(cycle)}, R = {cycle.regulator.to_float():.6f})")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return {"cycle_csv": csv_path, "cycle_png": png_path}


def save_qdist_report(run, out_dir: str) -> dict:
    """Write the Fourier outcome distribution and mark the good outcomes."""
    _ensure_dir(out_dir)
    csv_path = os.path.join(out_dir, "qdist.csv")
    png_path = os.path.join(out_dir, "qdist.png")
    mix = run.mixture()
    good = {g.j for g in run.good_js()}
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "probability", "good"])
        for j, p in enumerate(mix):
            w.writerow([j, f"{p:.12g}", int(j in good)])
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(np.arange(run.q), mix, lw=0.6)
    if good:
        gj = sorted(good)
        ax.plot(gj, mix[gj], "r.", ms=6, label="good j")
        ax.legend()
    ax.set_xlabel("measured j")
    ax.set_ylabel("probability")
    ax.set_title(f"d = {run.ctx.d}, N = {run.N}, q = {run.q}, "
                 f"S = {run.S.to_float():.4f}")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return {"qdist_csv": csv_path, "qdist_png": png_path}


def save_trials_report(stats: dict, out_dir: str) -> dict:
    """Write sampling statistics as trials.csv plus an outcome bar chart."""
    _ensure_dir(out_dir)
    csv_path = os.path.join(out_dir, "trials.csv")
    png_path = os.path.join(out_dir, "trials.png")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["key", "value"])
        for k in sorted(stats):
            w.writerow([k, stats[k]])
    labels = ["successes", "unvalidated", "zero_draws"]
    counts = [stats.get(k, 0) for k in labels]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(labels, counts)
    ax.set_ylabel("trials")
    ax.set_title(f"{stats.get('trials', 0)} sampled pairs, "
                 f"success rate {stats.get('success_rate', 0.0):.3f}")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return {"trials_csv": csv_path, "trials_png": png_path}
