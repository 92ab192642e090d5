"""Figure rendering for evaluation curves.

Renders the same data the CSV stream carries, so a report run can emit the
delimited output and a figure side by side.  Uses the Agg backend; nothing
here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import CoverageCurve


def save_curve_figure(curve: CoverageCurve, path: str, *,
                      delta: float | None = None, title: str = "") -> None:
    """Write a coverage/length-criterion figure for one curve to a file.

    Plots coverage and expected covering length against the prevalence grid,
    plus the two length-criterion probabilities when the curve carries them.
    The file format follows the path suffix (png, pdf, svg).
    """
    pis = [p.pi for p in curve.grid]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(pis, [p.coverage for p in curve.grid],
            color="black", label="coverage")
    ax.plot(pis, [p.expected_covering_length for p in curve.grid],
            color="black", linestyle="-.", label="expected covering length")
    if curve.grid[0].assured_length_prob is not None:
        ax.plot(pis, [p.assured_length_prob for p in curve.grid],
                color="black", linestyle="--", label="assured length prob")
        ax.plot(pis, [p.short_length_prob for p in curve.grid],
                color="black", linestyle=":", label="short length prob")
    if delta is not None:
        ax.axhline(delta, color="gray", linewidth=0.8, label=f"level {delta:g}")
    ax.set_xlabel("prevalence")
    ax.set_ylabel("probability / length")
    ax.set_title(title or f"method {curve.method}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
