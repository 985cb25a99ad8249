"""Figure rendering for path graphs and verification reports.

Written next to the textual reports when a figure path is requested;
deterministic layout (shift on the x axis, indecomposable index on y).
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .tstruct import Node, PathGraph

__all__ = ["render_path_graph", "render_check_summary"]


def render_path_graph(
    g: PathGraph,
    out_path: str,
    highlight: Optional[Dict[str, Iterable[Node]]] = None,
    path: Optional[Sequence[Node]] = None,
    title: str = "",
) -> str:
    """Draw nodes on a (shift, indecomposable) lattice with hom and shift
    edges; optional node-set highlights (aisles, hearts) and a path."""
    highlight = highlight or {}
    fig, ax = plt.subplots(figsize=(1.8 * (g.window[1] - g.window[0] + 1) + 2, 0.9 * len(g.indecs) + 2))

    def xy(n: Node) -> Tuple[float, float]:
        return (float(n[1]), float(n[0]))

    for a, b in sorted(g.shift_edges):
        (x0, y0), (x1, y1) = xy(a), xy(b)
        ax.annotate(
            "", xy=(x1, y1), xytext=(x0, y0),
            arrowprops=dict(arrowstyle="->", color="0.75", lw=0.8),
        )
    for a, b in sorted(g.hom_edges):
        (x0, y0), (x1, y1) = xy(a), xy(b)
        ax.annotate(
            "", xy=(x1, y1), xytext=(x0, y0),
            arrowprops=dict(arrowstyle="->", color="steelblue", lw=1.0,
                            connectionstyle="arc3,rad=0.15"),
        )
    if path:
        xs = [xy(n)[0] for n in path]
        ys = [xy(n)[1] for n in path]
        ax.plot(xs, ys, color="crimson", lw=2.0, alpha=0.7, zorder=3)

    palette = {"leq0": "#ffd9a8", "geq0": "#c4e0c4", "heart": "#f4b6c2"}
    drawn = set()
    for name, nodes in highlight.items():
        color = palette.get(name, "#dddddd")
        for n in nodes:
            x, y = xy(n)
            ax.scatter([x], [y], s=420, marker="s", color=color, zorder=2,
                       label=name if name not in drawn else None)
            drawn.add(name)
    for n in g.nodes():
        x, y = xy(n)
        ax.scatter([x], [y], s=18, color="black", zorder=4)
        ax.annotate(g.node_label(n), (x, y), textcoords="offset points",
                    xytext=(0, 8), ha="center", fontsize=8)
    ax.set_xlabel("shift")
    ax.set_yticks(range(len(g.indecs)))
    ax.set_yticklabels(g.labels)
    ax.set_xticks(range(g.window[0], g.window[1] + 1))
    if title:
        ax.set_title(title)
    if drawn:
        ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=140)
    plt.close(fig)
    return out_path


def render_check_summary(checks: Dict[str, dict], out_path: str, title: str = "") -> str:
    """Horizontal bar chart of runs per check, green for clean, red otherwise."""
    names = list(checks)
    runs = [checks[n].get("runs", 1) for n in names]
    fails = [checks[n].get("failures", 0) for n in names]
    colors = ["seagreen" if f == 0 else "firebrick" for f in fails]
    fig, ax = plt.subplots(figsize=(7, 0.5 * len(names) + 1.5))
    ax.barh(range(len(names)), runs, color=colors)
    for i, (r, f) in enumerate(zip(runs, fails)):
        ax.text(r, i, f" {r - f}/{r}", va="center", fontsize=8)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=9)
    ax.set_xlabel("runs")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=140)
    plt.close(fig)
    return out_path
