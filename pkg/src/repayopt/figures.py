"""Matplotlib rendering for the sweep reports.

Figures are written straight to files next to the delimited output; nothing
is ever shown interactively.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_frontier(
    rows: list[dict],
    path: str,
    *,
    x_star: float | None = None,
    asymptote: float | None = None,
) -> None:
    """Cost-to-balance ratio against balance, with the regime split marked."""
    xs = [row["x"] for row in rows]
    ratios = [row["cost_over_x"] for row in rows]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(xs, ratios, color="tab:blue", lw=1.8, label="cost / balance")
    if asymptote is not None:
        ax.axhline(asymptote, color="tab:gray", ls="--", lw=1.0, label="marginal cost")
    if x_star is not None and xs[0] <= x_star <= xs[-1]:
        ax.axvline(x_star, color="tab:red", ls=":", lw=1.2, label="critical balance")
    ax.set_xlabel("loan balance (thousands)")
    ax.set_ylabel("cost-to-balance ratio")
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_contour(
    betas: list[float], rs: list[float], grid: list[list[float]], path: str
) -> None:
    """Contours of the critical balance over (spread, discount rate)."""
    z = np.array(grid)  # shape (len(rs), len(betas))
    fig, ax = plt.subplots(figsize=(6.5, 5))
    cs = ax.contour(
        np.array(betas) * 100.0, np.array(rs) * 100.0, z, levels=12, cmap="viridis"
    )
    ax.clabel(cs, inline=True, fontsize=8, fmt="%.0f")
    ax.set_xlabel("loan spread (percent)")
    ax.set_ylabel("discount rate (percent)")
    ax.set_title("critical balance (thousands)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trajectory(samples: list[dict], t_c: float | None, path: str) -> None:
    """Balance and principal over time, payments as a step series below."""
    ts = [s["t"] for s in samples]
    fig, (ax1, ax2) = plt.subplots(
        2, 1, figsize=(7, 5.5), sharex=True, height_ratios=[2, 1]
    )
    ax1.plot(ts, [s["balance"] for s in samples], color="tab:blue", label="balance")
    ax1.plot(
        ts, [s["principal"] for s in samples], color="tab:orange", label="principal"
    )
    if t_c is not None and 0.0 < t_c < ts[-1]:
        ax1.axvline(t_c, color="tab:red", ls=":", lw=1.0, label="critical horizon")
    ax1.set_ylabel("thousands")
    ax1.legend(loc="best", frameon=False)
    ax2.step(ts, [s["rate"] for s in samples], where="post", color="tab:green")
    ax2.set_ylabel("payment rate")
    ax2.set_xlabel("years")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
