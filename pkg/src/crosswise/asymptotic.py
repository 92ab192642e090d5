"""Central-limit-theorem intervals for the sensitive prevalence.

Two constructions: "wp" solves the normalized-deviation inequality exactly
in pi (a quadratic, Wilson-style), "ap" plugs the unbiased variance
estimator into the normal pivot (Wald-style).  Neither keeps the nominal
confidence level in finite samples; both are provided for comparison with
the exact interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .exact import IntervalEstimate, _check_delta
from .model import ModelConfig, _check_count, pi_from_rho


@dataclass(frozen=True)
class UnbiasedEstimate:
    """Unclipped unbiased estimator of pi and its unbiased variance estimate."""

    pi_c: float
    variance_unbiased: float


def unbiased_estimate(config: ModelConfig, count) -> UnbiasedEstimate:
    """Unbiased prevalence estimate (may fall outside [0, 1], not clipped).

    The variance estimator divides by n - 1, so n >= 2 is required.
    """
    count = _check_count(config, count)
    if config.n < 2:
        raise ValueError("unbiased variance estimation requires n >= 2")
    rho_hat = count / config.n
    variance = (
        rho_hat * (1.0 - rho_hat)
        / ((config.n - 1) * (2.0 * config.q - 1.0) ** 2)
    )
    return UnbiasedEstimate(
        pi_c=pi_from_rho(rho_hat, config.q), variance_unbiased=variance
    )


def _wp_roots(n: int, q: float, u: float, pi_c: float):
    """Roots of the quadratic (pi_c - pi)^2 = u^2 Var(pi); collapsed if no real root.

    The discriminant is provably >= u^2/(1-2q)^2 > 0 for any attainable
    pi_c, so the collapsed branch is purely defensive.
    """
    disc = 4.0 * n * pi_c * (1.0 - pi_c) + (
        4.0 * n * (1.0 - q) * q + u * u
    ) / (1.0 - 2.0 * q) ** 2
    center = 2.0 * n * pi_c + u * u
    denom = 2.0 * (n + u * u)
    if disc < 0.0:
        vertex = center / denom
        return vertex, vertex, True
    spread = u * math.sqrt(disc)
    return (center - spread) / denom, (center + spread) / denom, False


def _clip_flags(method: str, raw_lower: float, raw_upper: float, collapsed=False):
    return IntervalEstimate(
        method=method,
        lower=min(max(raw_lower, 0.0), 1.0),
        upper=min(max(raw_upper, 0.0), 1.0),
        lower_degenerate=raw_lower < 0.0,
        upper_degenerate=raw_upper > 1.0,
        collapsed=collapsed,
    )


def wp_interval(config: ModelConfig, count, delta: float = 0.95) -> IntervalEstimate:
    """Quadratic-solution asymptotic interval, clipped to [0, 1] for reporting."""
    count = _check_count(config, count)
    delta = _check_delta(delta)
    u = special.normal_quantile((1.0 + delta) / 2.0)
    pi_c = pi_from_rho(count / config.n, config.q)
    lower, upper, collapsed = _wp_roots(config.n, config.q, u, pi_c)
    return _clip_flags("wp", lower, upper, collapsed)


def ap_interval(config: ModelConfig, count, delta: float = 0.95) -> IntervalEstimate:
    """Plug-in-variance asymptotic interval, clipped to [0, 1] for reporting."""
    delta = _check_delta(delta)
    est = unbiased_estimate(config, count)
    u = special.normal_quantile((1.0 + delta) / 2.0)
    half = u * math.sqrt(est.variance_unbiased)
    return _clip_flags("ap", est.pi_c - half, est.pi_c + half)


def wp_bounds(config: ModelConfig, delta: float, counts):
    """Vectorized clipped "wp" endpoints for an array of counts."""
    delta = _check_delta(delta)
    n, q = config.n, config.q
    z = np.asarray(counts, dtype=np.float64)
    u = special.normal_quantile((1.0 + delta) / 2.0)
    pi_c = (z / n - (1.0 - q)) / (2.0 * q - 1.0)
    disc = 4.0 * n * pi_c * (1.0 - pi_c) + (
        4.0 * n * (1.0 - q) * q + u * u
    ) / (1.0 - 2.0 * q) ** 2
    center = 2.0 * n * pi_c + u * u
    denom = 2.0 * (n + u * u)
    spread = u * np.sqrt(np.maximum(disc, 0.0))
    lower = np.clip((center - spread) / denom, 0.0, 1.0)
    upper = np.clip((center + spread) / denom, 0.0, 1.0)
    return lower, upper


def ap_bounds(config: ModelConfig, delta: float, counts):
    """Vectorized clipped "ap" endpoints for an array of counts."""
    delta = _check_delta(delta)
    n, q = config.n, config.q
    if n < 2:
        raise ValueError("unbiased variance estimation requires n >= 2")
    z = np.asarray(counts, dtype=np.float64)
    u = special.normal_quantile((1.0 + delta) / 2.0)
    rho_hat = z / n
    pi_c = (rho_hat - (1.0 - q)) / (2.0 * q - 1.0)
    half = u * np.sqrt(rho_hat * (1.0 - rho_hat) / ((n - 1) * (2.0 * q - 1.0) ** 2))
    lower = np.clip(pi_c - half, 0.0, 1.0)
    upper = np.clip(pi_c + half, 0.0, 1.0)
    return lower, upper
