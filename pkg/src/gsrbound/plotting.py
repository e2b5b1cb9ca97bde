"""PNG figures for the plot series of a report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import _stem, plot_series  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.4),
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}


def _margins(ax, rows, title):
    j = [r[0] for r in rows]
    m = [r[1] for r in rows]
    ax.bar(j, m, color=["C0" if v >= 0 else "C3" for v in m])
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("level j")
    ax.set_ylabel("rhs - lhs")
    ax.set_title(title)


def _sandwich(ax, rows, title):
    h = [r[0] for r in rows]
    ax.plot(h, [r[1] for r in rows], "o-", label="S")
    ax.plot(h, [r[2] for r in rows], "s--", label="upper")
    ax.plot(h, [r[3] for r in rows], "v--", label="lower")
    ax.set_xscale("log")
    ax.set_xlabel("mesh h")
    ax.set_ylabel("moment sum")
    ax.legend(frameon=False)
    ax.set_title(title)


def _cemp(ax, rows, title):
    ax.plot([r[0] for r in rows], [r[1] for r in rows], "o", ms=4)
    ax.set_xlabel("trial")
    ax.set_ylabel("lhs / norm")
    ax.set_title(title)


def _bands(ax, rows, title):
    for lo, hi in rows:
        ax.plot([lo, hi], [0, 0], lw=6, solid_capstyle="butt", color="C0")
    ax.set_yticks([])
    ax.set_xlabel("energy")
    ax.set_title(title)


_DRAW = {"margins.dat": _margins, "sandwich.dat": _sandwich, "cemp.dat": _cemp, "bands.dat": _bands}


def bands_figure(bands, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 1.6))
        _bands(ax, bands, "band spectrum")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return Path(path)


def render_figures(report, out_dir) -> list[Path]:
    """One PNG per plot series, next to the ``.dat`` files of the same scenario."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    paths = []
    with plt.rc_context(STYLE):
        for result in data["results"]:
            d = Path(out_dir) / _stem(result)
            for name, rows in plot_series(result).items():
                if not rows:
                    continue
                d.mkdir(parents=True, exist_ok=True)
                fig, ax = plt.subplots()
                _DRAW[name](ax, rows, f"{result['name']} ({result['kind']})")
                fig.tight_layout()
                path = d / name.replace(".dat", ".png")
                fig.savefig(path)
                plt.close(fig)
                paths.append(path)
    return paths
