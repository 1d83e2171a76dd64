"""Static SVG figures of the particle and cloud motion."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .trajectories import TrajectorySeries  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "svg.fonttype": "none",
    "svg.hashsalt": "inertonlab",
}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # no timestamp, so reruns produce identical files
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _period_lines(ax, t_end, T):
    for k in range(1, int(math.floor(t_end / T + 1e-9)) + 1):
        ax.axvline(k, color="0.85", lw=0.6, zorder=0)


def plot_four_panel(series: TrajectorySeries, v0, c, T, Lam, path):
    """Particle speed and position, cloud distance and velocity, against ``t/T``."""
    tt = series.t / T
    panels = (
        (series.Xdot / v0, r"$\dot X / v_0$", "(a) particle speed"),
        (series.X / (v0 * T), r"$X / \lambda$", "(b) particle position"),
        (series.x / (Lam / math.pi), r"$x\,\pi / \Lambda$", "(c) cloud distance"),
        (series.xdot / c, r"$\dot x / c$", "(d) cloud velocity"),
    )
    with plt.rc_context(RC):
        fig, axes = plt.subplots(4, 1, figsize=(6.0, 7.5), sharex=True)
        for ax, (y, label, title) in zip(axes, panels):
            _period_lines(ax, series.t[-1], T)
            if title.startswith("(d)"):
                # the cloud velocity jumps at every nT; break the line there
                n = np.floor(tt + 1e-12)
                y = np.where(np.diff(n, prepend=n[0]) != 0, np.nan, y)
            ax.plot(tt, y, color="k")
            ax.set_ylabel(label)
            ax.set_title(title, loc="left")
        axes[-1].set_xlabel(r"$t / T$")
        axes[-1].set_xlim(tt[0], tt[-1])
        fig.tight_layout()
        return _save(fig, path)


def plot_period_ruler(series: TrajectorySeries, v0, T, Lam, path):
    """Cloud excursions over the path ``l = v0 t``, with ticks every spatial period."""
    l = v0 * series.t
    lam = v0 * T
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6.5, 2.4))
        ax.plot(l / lam, series.x / Lam, color="k", label="cloud distance $x / \\Lambda$")
        ax.axhline(0.0, color="0.3", lw=0.8)
        n_periods = int(math.floor(l[-1] / lam + 1e-9))
        for k in range(n_periods + 1):
            ax.plot([k, k], [-0.04, 0.04], color="0.3", lw=0.8)
        if n_periods >= 1:
            ax.annotate("", xy=(0, -0.09), xytext=(1, -0.09), arrowprops={"arrowstyle": "<->", "lw": 0.8})
            ax.text(0.5, -0.16, r"$\lambda = v_0 T$", ha="center", va="top")
            ax.annotate("", xy=(0.5, 0.0), xytext=(0.5, 1 / math.pi), arrowprops={"arrowstyle": "<->", "lw": 0.8})
            ax.text(0.53, 0.5 / math.pi, r"$\Lambda / \pi$", va="center")
        ax.set_xlabel(r"path $l / \lambda$")
        ax.set_ylim(-0.25, 0.42)
        ax.set_yticks([0.0, 1 / math.pi])
        ax.set_yticklabels(["0", r"$1/\pi$"])
        ax.set_title("particle path divided into spatial periods; cloud excursion per period", loc="left")
        fig.tight_layout()
        return _save(fig, path)
