"""Figures for fixture runs, written with the Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def timings_chart(timings, path):
    """Bar chart of runtime per fixture."""
    names = list(timings)
    vals = [timings[n] for n in names]
    fig, ax = plt.subplots(figsize=(8, 0.35 * len(names) + 1.2))
    ax.barh(names, vals, color="#4c72b0")
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    ax.set_title("fixture runtimes")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def support_scatter(supports, path):
    """First two exponents of every monomial in each fixture's certificates."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for label, monos in supports.items():
        pts = [(float(m[0]), float(m[1]) if len(m) > 1 else 0.0) for m in monos]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, label=label, s=18, alpha=0.7)
    ax.set_xlabel("exponent of first variable")
    ax.set_ylabel("exponent of second variable")
    ax.set_title("certificate exponent support")
    if supports:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def degree_bookkeeping(rows, path):
    """deg F(eta) against p * deg eta; every point should sit on the diagonal."""
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [float(p * d) for _, d, _, p in rows]
    ys = [float(f) for _, _, f, _ in rows]
    ax.scatter(xs, ys, zorder=3)
    seen = {}
    for (label, _, _, _), x, y in zip(rows, xs, ys):
        k = seen[(x, y)] = seen.get((x, y), -1) + 1
        ax.annotate(label, (x, y), fontsize="small", xytext=(4, 3 - 11 * k), textcoords="offset points")
    lo = min(xs + ys + [0.0]) - 1
    hi = max(xs + ys + [0.0]) + 1
    ax.plot([lo, hi], [lo, hi], color="grey", lw=0.8)
    ax.set_xlabel("p * deg(eta)")
    ax.set_ylabel("deg F(eta)")
    ax.set_title("degree bookkeeping")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)
