"""Figure rendering for report artifacts.

Each renderer writes a matplotlib figure next to the JSON/DOT output;
the file format follows the path suffix (png, pdf, svg).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_slice_figure(slice_data: dict, path: str) -> None:
    """Draw a curve-complex slice: one node per splitting class."""
    vertices = slice_data["vertices"]
    edges = slice_data.get("edges", [])
    n = len(vertices)
    fig, ax = plt.subplots(figsize=(6, 6))
    coords = []
    for i in range(n):
        angle = 2 * math.pi * i / max(n, 1)
        coords.append((math.cos(angle), math.sin(angle)))
    for i, j in edges:
        (x0, y0), (x1, y1) = coords[i], coords[j]
        ax.plot([x0, x1], [y0, y1], color="gray", zorder=1)
    for (x, y), vert in zip(coords, vertices):
        kind = vert["kind"]
        if kind == "hnn":
            label = "HNN"
            color = "tab:red"
        else:
            label = f"amalg n={kind['amalg']}, r'={vert['rprime']}"
            color = "tab:blue"
        ax.scatter([x], [y], s=220, color=color, zorder=2)
        ax.annotate(label, (x, y), textcoords="offset points", xytext=(0, 14),
                    ha="center", fontsize=8)
    ax.set_title("cyclic-splitting classes and compatibility edges")
    ax.set_xlim(-1.6, 1.6)
    ax.set_ylim(-1.6, 1.6)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_separation_figure(table: dict, path: str) -> None:
    """Bar chart of Whitehead-minimal cyclic lengths per relator level."""
    rows = table["rows"]
    labels = [str(row["rprime"]) for row in rows]
    lengths = [row["length"] for row in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    bars = ax.bar(labels, lengths, color="tab:blue")
    for bar, row in zip(bars, rows):
        mark = "min" if row["minimal"] else "?"
        ax.annotate(mark, (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                    ha="center", va="bottom", fontsize=9)
    ax.set_xlabel("r'")
    ax.set_ylabel("minimal cyclic length of the relator")
    ax.set_title("Whitehead-minimal lengths separate the family")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
