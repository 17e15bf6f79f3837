"""SVG biplots rendered with matplotlib."""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .tca import Biplot  # noqa: E402

__all__ = ["emit_svg"]

_RC = {
    "svg.hashsalt": "tcarank",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "axes.unicode_minus": False,
}


def _r(x: float) -> float:
    return round(float(x), 4) + 0.0  # normalizes -0.0


def emit_svg(biplot: Biplot, width: float = 6.0, height: float = 5.0) -> str:
    """Render one biplot as standalone SVG text.

    Voters are dots, items are text labels, NEGA is a red diamond; the axes
    cross at the origin. Output is byte-identical for identical input.
    """
    pts = [(x, y) for _, x, y in biplot.voters + biplot.items]
    pts.append(biplot.nega)
    if not all(math.isfinite(v) for p in pts for v in p):
        raise ValueError("biplot coordinates must be finite")
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(width, height))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        ax.axhline(0.0, color="0.6", lw=0.8, gid="axis-x")
        ax.axvline(0.0, color="0.6", lw=0.8, gid="axis-y")
        if biplot.voters:
            xs = [_r(x) for _, x, _ in biplot.voters]
            ys = [_r(y) for _, _, y in biplot.voters]
            ax.scatter(xs, ys, s=14, color="tab:blue", gid="voters")
            for lab, x, y in zip((v[0] for v in biplot.voters), xs, ys):
                ax.annotate(lab, (x, y), fontsize=6, color="tab:blue",
                            xytext=(3, 3), textcoords="offset points")
        for lab, x, y in biplot.items:
            ax.text(_r(x), _r(y), lab, fontsize=11, fontweight="bold",
                    ha="center", va="center", gid=f"item-{lab}")
        if biplot.voters or biplot.items:
            nx, ny = _r(biplot.nega[0]), _r(biplot.nega[1])
            ax.scatter([nx], [ny], marker="D", s=40, color="tab:red", gid="nega")
            ax.annotate("NEGA", (nx, ny), fontsize=8, color="tab:red",
                        xytext=(4, -10), textcoords="offset points")
        xs_all = [_r(p[0]) for p in pts] + [0.0]
        ys_all = [_r(p[1]) for p in pts] + [0.0]
        pad = lambda lo, hi: 0.1 * max(hi - lo, 1e-3)  # noqa: E731
        lo, hi = min(xs_all), max(xs_all)
        ax.set_xlim(lo - pad(lo, hi), hi + pad(lo, hi))
        lo, hi = min(ys_all), max(ys_all)
        ax.set_ylim(lo - pad(lo, hi), hi + pad(lo, hi))
        (ax_x, ax_y), (lx, ly) = biplot.axes, biplot.lambdas
        ax.set_xlabel(f"axis {ax_x}  (lambda = {lx:.4f})")
        ax.set_ylabel(f"axis {ax_y}  (lambda = {ly:.4f})")
        if biplot.title:
            ax.set_title(biplot.title)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    return buf.getvalue()
