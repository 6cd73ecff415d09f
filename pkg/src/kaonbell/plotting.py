"""Matplotlib figure rendering for the report commands.

Figures are written next to the delimited output; the CSV stays the
primary artifact.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .diagrams import TrajectoryPoint, mems_curve, werner_curve


def save_purity_scan(ts, purities, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ts, purities, lw=1.2)
    ax.set_xlabel(r"$t\ [\tau_S]$")
    ax.set_ylabel(r"purity $\mathrm{Tr}\,\rho^2$")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_trajectory(
    points: list[TrajectoryPoint],
    path: str | Path,
    title: str = "",
    concurrence: str = "renorm",
) -> Path:
    """Purity-vs-concurrence diagram with Werner and MEMS reference curves."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for curve, label, style in (
        (mems_curve(400), "MEMS (d=4)", "-"),
        (werner_curve(400), "Werner (d=4)", "--"),
    ):
        pur, con = zip(*curve)
        ax.plot(con, pur, style, lw=1.0, label=label)
    cs = [
        p.concurrence_renorm if concurrence == "renorm" else p.concurrence_raw
        for p in points
    ]
    ps = [p.purity_norm for p in points]
    ax.scatter(cs, ps, s=4, c=np.linspace(0, 1, len(points)), cmap="viridis",
               label="kaon trajectory (d=16)")
    ax.set_xlabel("concurrence")
    ax.set_ylabel("normalized purity")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.05)
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_s_curve(rows, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    us, ss = zip(*rows)
    ax.plot(us, ss, lw=1.2)
    ax.axhline(2.0, color="red", ls=":", lw=1.0, label="local realism bound")
    ax.set_xlabel("path parameter u")
    ax.set_ylabel("S")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_reference_curves(path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for curve, label, style in (
        (mems_curve(400), "MEMS", "-"),
        (werner_curve(400), "Werner", "--"),
    ):
        pur, con = zip(*curve)
        ax.plot(con, pur, style, lw=1.2, label=label)
    ax.set_xlabel("concurrence")
    ax.set_ylabel("normalized purity (d=4)")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
