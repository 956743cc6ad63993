"""Matplotlib renderings written next to the delimited report files."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graph_lattice import Graph, enumerate_lattice, vertex_classification  # noqa: E402

_STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.bbox": "tight",
}


def _save(fig, path: Path) -> Path:
    # fixed metadata keeps the bytes stable between runs
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def draw_graph(g: Graph, path: Path) -> Path:
    """Circular layout, vertices coloured by class."""
    vc = vertex_classification(g)
    n = len(g)
    pos = {v: (math.cos(2 * math.pi * k / max(n, 1)), math.sin(2 * math.pi * k / max(n, 1)))
           for k, v in enumerate(g.vertices)}
    cmap = plt.get_cmap("tab20")
    colour = {}
    for k, c in enumerate(vc.classes):
        for v in c.names():
            colour[v] = cmap(k % 20)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4, 4))
        for u, v in g.edges():
            ax.plot(*zip(pos[u], pos[v]), color="0.4", lw=1, zorder=1)
        for v in g.vertices:
            ax.scatter(*pos[v], s=380, color=colour[v], edgecolor="k", zorder=2)
            ax.annotate(v, pos[v], ha="center", va="center", zorder=3)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.set_title(f"{n} vertices, {len(g.edges())} edges, {len(vc.classes)} classes")
        return _save(fig, path)


def draw_lattice(g: Graph, kind: str, path: Path) -> Path:
    """Hasse diagram with elements stacked by cardinality."""
    lat = enumerate_lattice(g, kind)
    levels: dict = {}
    for i, Y in enumerate(lat.elements):
        levels.setdefault(len(Y), []).append(i)
    pos = {}
    for size, idxs in levels.items():
        for k, i in enumerate(idxs):
            pos[i] = (k - (len(idxs) - 1) / 2, size)
    with plt.rc_context(_STYLE):
        width = max(4, 1.1 * max(len(v) for v in levels.values()))
        fig, ax = plt.subplots(figsize=(width, 1 + 0.8 * len(levels)))
        for lo, hi in lat.hasse:
            ax.plot(*zip(pos[lo], pos[hi]), color="0.6", lw=0.8, zorder=1)
        for i, Y in enumerate(lat.elements):
            label = "{" + ",".join(Y.names()) + "}"
            ax.annotate(label, pos[i], ha="center", va="center", fontsize=7,
                        bbox=dict(boxstyle="round", fc="w", ec="0.3"), zorder=2)
        ax.set_yticks(sorted(levels))
        ax.set_ylabel("cardinality")
        ax.set_xticks([])
        ax.spines["bottom"].set_visible(False)
        xs = [p[0] for p in pos.values()] or [0]
        ax.set_xlim(min(xs) - 1, max(xs) + 1)
        ax.set_title(f"lattice {kind}: {len(lat)} elements")
        return _save(fig, path)


def draw_family_counts(counts: dict, path: Path) -> Path:
    """Bar chart of instance and pass counts per relator family."""
    fams = list(counts)
    total = [counts[f][0] for f in fams]
    passed = [counts[f][1] for f in fams]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(4, 0.45 * len(fams)), 3))
        xs = range(len(fams))
        ax.bar(xs, total, color="0.8", label="instances")
        ax.bar(xs, passed, width=0.5, color="tab:green", label="verified")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(fams, rotation=60, ha="right")
        ax.set_yscale("log")
        ax.legend(frameon=False)
        return _save(fig, path)


def analysis_figures(g: Graph, outdir: Path) -> list:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        draw_graph(g, outdir / "graph.png"),
        draw_lattice(g, "K", outdir / "lattice_K.png"),
        draw_lattice(g, "L", outdir / "lattice_L.png"),
    ]
