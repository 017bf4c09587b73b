"""Convergence plots: mean-return line, std band, moving average, as SVG."""

from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .runner import read_summary

MOVING_AVERAGE_WINDOW = 100


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    """Trailing mean over up-to-`window` previous points, same length out."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    sums = np.cumsum(np.insert(values, 0, 0.0))
    out = np.empty_like(values, dtype=float)
    for i in range(values.size):
        lo = max(0, i + 1 - window)
        out[i] = (sums[i + 1] - sums[lo]) / (i + 1 - lo)
    return out


def emit_plot(summary_csv_path, out_svg_path, title: str | None = None) -> None:
    """Render a summary CSV to a labelled SVG convergence plot."""
    columns = read_summary(summary_csv_path)
    episodes = columns["episode"]
    if episodes.size < 2:
        raise ValueError("summary must contain at least 2 episodes to plot")
    mean = columns["mean_return"]
    std = columns["std_return"]
    window = min(MOVING_AVERAGE_WINDOW, episodes.size)

    fig = Figure(figsize=(8, 4.5))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot(111)
    band = ax.fill_between(
        episodes, mean - std, mean + std, alpha=0.25, linewidth=0, color="#4477aa"
    )
    band.set_gid("std-band")
    (line,) = ax.plot(episodes, mean, linewidth=0.8, color="#4477aa", alpha=0.8)
    line.set_gid("mean-return")
    (smooth,) = ax.plot(
        episodes, moving_average(mean, window), linewidth=1.8, color="#cc3311"
    )
    smooth.set_gid("moving-average")
    ax.set_xlabel("episode")
    ax.set_ylabel("return")
    if title:
        ax.set_title(title)
    ax.margins(x=0)
    fig.tight_layout()
    fig.savefig(out_svg_path, format="svg")
