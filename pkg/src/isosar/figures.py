"""Figure rendering for the CLI report paths.

Every plot is written straight to a file with a pinned style and stripped
metadata so that repeated runs produce byte-identical images.  CSV stays
the primary machine interface; figures are companions for eyeballing the
scaling behavior.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_SAVE_KWARGS = {"dpi": 150, "metadata": {"Software": "isosar"}}

plt.rcParams.update(
    {
        "figure.figsize": (6.4, 4.0),
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "lines.markersize": 4,
    }
)


def scan_figure(rows: list[dict], d: int, D: int, path: str) -> None:
    """Infidelity scaling: raw curve plus the n- and n^2-compensated views."""
    ns = [r["n"] for r in rows]
    inf = [r["infidelity"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.loglog(ns, inf, "o-", label="1 - F")
    guide_pow = 2 if D == d else 1
    guide = [inf[0] * (ns[0] / n) ** guide_pow for n in ns]
    ax1.loglog(ns, guide, "k--", lw=0.8, label=f"slope -{guide_pow}")
    ax1.set_xlabel("n")
    ax1.set_ylabel("1 - F")
    ax1.legend()
    ax2.semilogx(ns, [r["n_infidelity"] for r in rows], "o-", label="n (1-F)")
    ax2.semilogx(ns, [r["n2_infidelity"] for r in rows], "s-", label="n^2 (1-F)")
    ax2.set_xlabel("n")
    ax2.legend()
    fig.suptitle(f"estimation fidelity scaling, d={d}, D={D}")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def cost_figure(rows: list[dict], slope: float, intercept: float, target: float, path: str) -> None:
    """Program cost against log2(1/eps) with the fitted line and target slope."""
    xs = [math.log2(1.0 / r["eps"]) for r in rows]
    ys = [r["cost_bits"] for r in rows]
    fig, ax = plt.subplots()
    ax.plot(xs, ys, "o", label="cost")
    ax.plot(xs, [slope * x + intercept for x in xs], "-", label=f"fit slope {slope:.3f}")
    ax.plot(
        xs,
        [target * x + (ys[0] - target * xs[0]) for x in xs],
        "k--",
        lw=0.8,
        label=f"target slope {target:.2f}",
    )
    ax.set_xlabel("log2(1/eps)")
    ax.set_ylabel("program cost [bits]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def queries_figure(rows: list[dict], path: str) -> None:
    """Query complexity against 1/eps for both strategies, log-log."""
    inv_eps = [1.0 / r["eps"] for r in rows]
    fig, ax = plt.subplots()
    ax.loglog(inv_eps, [r["n_classical"] for r in rows], "o-", label="classical")
    ax.loglog(inv_eps, [r["n_quantum"] for r in rows], "s-", label="quantum")
    ax.set_xlabel("1/eps")
    ax.set_ylabel("queries n")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def bounds_figure(rows: list[dict], path: str) -> None:
    """Lower bound, achieved, optimal, and converse across the sweep."""
    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots()
    for key, style in (
        ("lower_bound", "v--"),
        ("achieved", "o-"),
        ("optimal", "s-"),
        ("upper_bound", "^--"),
    ):
        ax.plot(ns, [r[key] for r in rows], style, label=key)
    ax.set_xlabel("n")
    ax.set_ylabel("fidelity")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
