"""Exact equitailed confidence interval for the sensitive prevalence.

The interval is built on the report-probability scale as the classical
Clopper-Pearson interval for the observed count, then mapped through the
affine prevalence relation (which reverses endpoint order because the slope
2q - 1 is negative for q < 0.5) and clipped to [0, 1].  At interior counts
this coincides with inverting the exact estimator distribution; the clipped
branches carry degeneracy flags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import special
from .model import ModelConfig, _check_count


@dataclass(frozen=True)
class IntervalEstimate:
    """A confidence interval for pi with its construction tag.

    method is one of "cp" (exact equitailed), "wp" (quadratic-solution
    asymptotic) or "ap" (plug-in-variance asymptotic).  The degeneracy flags
    record that the raw endpoint fell outside [0, 1] and was clipped.
    collapsed marks the defensive quadratic-discriminant branch of "wp".
    """

    method: str
    lower: float
    upper: float
    lower_degenerate: bool
    upper_degenerate: bool
    collapsed: bool = False

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError("interval endpoints must satisfy 0 <= lower <= upper <= 1")

    @property
    def length(self) -> float:
        return self.upper - self.lower


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError("confidence level delta must lie in (0, 1)")
    return delta


def report_prob_bounds(n: int, delta: float, counts: np.ndarray):
    """Clopper-Pearson bounds for the report probability at each count.

    Vectorized over counts; count 0 pins the lower bound at 0 and count n
    pins the upper bound at 1.
    """
    z = np.asarray(counts, dtype=np.float64)
    rho_lo = np.zeros(z.shape)
    rho_hi = np.ones(z.shape)
    alpha = (1.0 - delta) / 2.0
    pos = z > 0
    if np.any(pos):
        rho_lo[pos] = special.inv_reg_inc_beta(z[pos], n - z[pos] + 1.0, alpha)
    below = z < n
    if np.any(below):
        rho_hi[below] = special.inv_reg_inc_beta(
            z[below] + 1.0, n - z[below], 1.0 - alpha
        )
    return rho_lo, rho_hi


def cp_bounds(config: ModelConfig, delta: float, counts):
    """Clipped prevalence interval endpoints for an array of counts.

    Returns (lower, upper, lower_degenerate, upper_degenerate) arrays.
    """
    delta = _check_delta(delta)
    rho_lo, rho_hi = report_prob_bounds(config.n, delta, counts)
    slope = 1.0 - 2.0 * config.q
    raw_lower = (1.0 - config.q - rho_hi) / slope
    raw_upper = (1.0 - config.q - rho_lo) / slope
    lower = np.clip(raw_lower, 0.0, 1.0)
    upper = np.clip(raw_upper, 0.0, 1.0)
    return lower, upper, raw_lower < 0.0, raw_upper > 1.0


def cp_interval(config: ModelConfig, count, delta: float = 0.95) -> IntervalEstimate:
    """Exact equitailed confidence interval for pi at the observed count."""
    count = _check_count(config, count)
    lower, upper, low_deg, upp_deg = cp_bounds(
        config, delta, np.array([count], dtype=np.float64)
    )
    return IntervalEstimate(
        method="cp",
        lower=float(lower[0]),
        upper=float(upper[0]),
        lower_degenerate=bool(low_deg[0]),
        upper_degenerate=bool(upp_deg[0]),
    )


def cp_length(config: ModelConfig, count, delta: float = 0.95) -> float:
    """Length (upper - lower) of the exact interval at the observed count."""
    return cp_interval(config, count, delta).length
