"""Optional matplotlib rendering for cone reports and delta-surface grids.

Figures are a convenience side channel of the report commands; nothing in
the exact pipeline depends on them.  matplotlib is imported lazily so the
library works without a plotting stack.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .report import ConeReport


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_cone_figure(report: ConeReport, path: str) -> str:
    """Draw the c = 1 cross-section of the cone (rays as points, facets as
    segments); the B ray is drawn as the point at infinity marker below."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = []
    for r in report.data["rays"]:
        a, b, c = r["vec"]
        if c > 0:
            pts.append((a / c, b / c, r["label"]))
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    ax.plot(xs, ys, "o", color="tab:blue")
    for x, y, lbl in pts:
        ax.annotate(lbl.replace("_", " "), (x, y), fontsize=7,
                    xytext=(3, 3), textcoords="offset points")
    if len(pts) > 1:
        order = sorted(range(len(pts)), key=lambda i: (xs[i], ys[i]))
        ax.plot([xs[i] for i in order], [ys[i] for i in order],
                "-", color="tab:gray", linewidth=0.8)
    has_b = any(tuple(r["vec"]) == (0, 0, -1) for r in report.data["rays"])
    if has_b:
        ax.plot([], [], "s", color="tab:red", label="B (c < 0)")
        ax.legend(loc="upper right", fontsize=7)
    n = report.data.get("n")
    title = f"effective cone, n = {n}" if n is not None else "effective cone"
    ax.set_title(title)
    ax.set_xlabel("a / c")
    ax.set_ylabel("b / c")
    ax.grid(True, linewidth=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_delta_grid(grid, path: str) -> str:
    """Heat map of delta-surface samples: rows of (mu1, mu2, value)."""
    plt = _pyplot()
    xs = [float(Fraction(r[0])) for r in grid]
    ys = [float(Fraction(r[1])) for r in grid]
    vs = [float(Fraction(r[2])) for r in grid]
    fig, ax = plt.subplots(figsize=(5, 4))
    sc = ax.scatter(xs, ys, c=vs, s=6, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="delta")
    ax.set_xlabel("mu1")
    ax.set_ylabel("mu2")
    ax.set_title("delta surface samples")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
