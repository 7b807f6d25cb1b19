"""Figures written next to the CSV/JSON reports."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

# no timestamps or version strings, so reruns are byte-identical
PNG_META = {"Software": None}

plt.rcParams.update({
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "figure.dpi": 100,
    "savefig.dpi": 120,
    "path.simplify": False,
})


def figsize(width=5.0, ratio=None):
    if ratio is None:
        ratio = (math.sqrt(5) - 1.0) / 2.0
    return (width, width * ratio)


def save(fig, path):
    path = Path(path)
    fig.savefig(path, metadata=PNG_META)
    plt.close(fig)
    return path


def plot_hasse(L, path, title=None):
    """Hasse diagram laid out by height; complement pairs drawn dashed."""
    h = L.heights()
    levels = {}
    for a in range(L.n):
        levels.setdefault(h[a], []).append(a)
    pos = {}
    for y, row in levels.items():
        for k, a in enumerate(row):
            pos[a] = (k - (len(row) - 1) / 2, y)
    fig, ax = plt.subplots(figsize=figsize(4.5, 0.8))
    for a, b in L.covers():
        ax.plot(*zip(pos[a], pos[b]), color="0.3", lw=1.0, zorder=1)
    for a in range(L.n):
        c = L.comp[a]
        if a < c and a not in (L.bottom, L.top):
            ax.plot(*zip(pos[a], pos[c]), color="C3", lw=0.7, ls="--", zorder=0)
    for a, (x, y) in pos.items():
        ax.scatter([x], [y], s=320, color="white", edgecolor="k", zorder=2)
        ax.text(x, y, L.labels[a], ha="center", va="center", fontsize=7, zorder=3)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    return save(fig, path)


def plot_solution(config, solution, path, title=None):
    """Ball worldlines projected on the plane, with both mouths."""
    w = config.wormhole
    fig, ax = plt.subplots(figsize=figsize(5.0, 0.85))
    for mouth, c in (("A", w.mouth_a), ("B", w.mouth_b)):
        ax.add_patch(Circle(c, w.radius, fill=False, lw=1.2, color="k"))
        ax.text(c[0], c[1], mouth, ha="center", va="center")
    by_ball = {}
    for ball, lineage, t, x, y, vx, vy in solution.trajectory:
        by_ball.setdefault((ball, lineage), []).append((t, x, y))
    for k, ((ball, lineage), pts) in enumerate(sorted(by_ball.items())):
        pts.sort()
        xs = [p[1] for p in pts]
        ys = [p[2] for p in pts]
        ax.plot(xs, ys, "-", color=f"C{k}", lw=1.2, label=f"ball {ball} (lineage {lineage})")
        ax.plot(xs[0], ys[0], "o", color=f"C{k}", ms=3)
    for e in solution.events:
        if e.kind == "collision":
            for ball, lineage, t, x, y, vx, vy in solution.trajectory:
                if ball == e.participants[0] and t == e.time:
                    ax.plot(x, y, "x", color="k", ms=6)
    xmin, xmax, ymin, ymax = config.domain
    ax.set_xlim(xmin, xmax)
    ax.set_ylim(ymin, ymax)
    ax.set_aspect("equal")
    ax.set_xlabel(r"$x$")
    ax.set_ylabel(r"$y$")
    ax.legend(loc="upper right")
    if title:
        ax.set_title(title)
    return save(fig, path)
