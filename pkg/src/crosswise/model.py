"""Probability layer of the crosswise survey design.

A respondent reports 1 exactly when the answers to the sensitive question
(YES with unknown probability ``pi``) and an independent neutral question
(YES with known probability ``q``) coincide, so the observable count is
Binomial(n, rho) with ``rho = (2q - 1) * pi + (1 - q)``.  This module holds
that mapping, the clipped maximum-likelihood estimator of ``pi``, and the
estimator's exact distribution.

All distribution computations are indexed by the observed count z in
{0, ..., n}; the estimate scale is derived from it, which avoids
floating-point ceiling/floor hazards on atom boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import special


@dataclass(frozen=True)
class ModelConfig:
    """One survey instrument: sample size n and neutral YES-probability q.

    Designs assume 0 < q < 0.5.  q = 0 (asking the sensitive question
    directly) is accepted so exact cross-checks against the plain binomial
    experiment are possible; it offers no privacy and is not a usable design.
    """

    n: int
    q: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError("sample size n must be a positive integer")
        if not (0.0 <= self.q < 0.5):
            raise ValueError("neutral probability q must satisfy 0 <= q < 0.5")

    @property
    def count_one_atom(self) -> int:
        """Largest count whose estimate clips to 1 (counts z <= n*q)."""
        return int(np.floor(self.n * self.q))

    @property
    def count_zero_atom(self) -> int:
        """Smallest count whose estimate clips to 0 (counts z >= n*(1-q))."""
        return self.n - self.count_one_atom


@dataclass(frozen=True)
class EstimatorDistribution:
    """Exact pmf of the clipped MLE: atom locations and their masses."""

    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        self.support.setflags(write=False)
        self.mass.setflags(write=False)
        if np.any(np.diff(self.support) <= 0.0):
            raise ValueError("support values must be strictly increasing")

    def cdf_at(self, x: float) -> float:
        """Cumulative mass of atoms located at or below x."""
        return float(np.sum(self.mass[self.support <= x]))

    def cdf_below(self, x: float) -> float:
        """Cumulative mass of atoms strictly below x."""
        return float(np.sum(self.mass[self.support < x]))


def _check_count(config: ModelConfig, count) -> int:
    count = int(count)
    if not 0 <= count <= config.n:
        raise ValueError(f"count must lie in [0, {config.n}]")
    return count


def rho_from_pi(pi: float, q: float) -> float:
    """Probability of observing a 1-report given sensitive prevalence pi."""
    if not 0.0 <= pi <= 1.0:
        raise ValueError("pi must lie in [0, 1]")
    return (2.0 * q - 1.0) * pi + (1.0 - q)


def pi_from_rho(rho: float, q: float) -> float:
    """Affine inverse of rho_from_pi; may land outside [0, 1] (callers clip)."""
    if q == 0.5:
        raise ValueError("q = 0.5 makes pi unidentifiable")
    return (rho - (1.0 - q)) / (2.0 * q - 1.0)


def mle(config: ModelConfig, count) -> float:
    """Maximum-likelihood estimate of pi from the observed count, clipped to [0, 1]."""
    count = _check_count(config, count)
    if count >= config.count_zero_atom:
        return 0.0
    if count <= config.count_one_atom:
        return 1.0
    return min(max(pi_from_rho(count / config.n, config.q), 0.0), 1.0)


def estimator_distribution(config: ModelConfig, pi: float) -> EstimatorDistribution:
    """Exact distribution of the clipped MLE under true prevalence pi.

    The boundary atoms aggregate the clipped count ranges; interior atoms sit
    at the estimate of each count with its binomial mass.  Boundary masses use
    the Beta closed form of the binomial tail, which tests verify against
    direct tail summation.
    """
    n, q = config.n, config.q
    rho = rho_from_pi(pi, q)
    m1 = config.count_one_atom
    m0 = config.count_zero_atom
    interior = np.arange(m0 - 1, m1, -1)  # decreasing count = increasing estimate

    mass_at_zero = special.reg_inc_beta(float(m0), float(n - m0 + 1), rho)
    mass_at_one = 1.0 - special.reg_inc_beta(float(m1 + 1), float(n - m1), rho)

    support = np.empty(interior.size + 2)
    mass = np.empty(interior.size + 2)
    support[0], support[-1] = 0.0, 1.0
    mass[0], mass[-1] = mass_at_zero, mass_at_one
    if interior.size:
        support[1:-1] = np.clip(
            (interior / n - (1.0 - q)) / (2.0 * q - 1.0), 0.0, 1.0
        )
        mass[1:-1] = special.binom_pmf(n, interior, rho)
    return EstimatorDistribution(support=support, mass=mass)


def estimator_cdf(config: ModelConfig, pi: float, x: float) -> float:
    """P{clipped MLE <= x} under true prevalence pi, for x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 1.0:
        return 1.0
    n, q = config.n, config.q
    rho = rho_from_pi(pi, q)
    # Smallest count whose estimate is <= x; the estimate is nonincreasing in
    # the count, so P{MLE <= x} is the upper binomial tail from that count.
    lo, hi = 0, n  # mle(lo) > x, mle(hi) <= x
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mle(config, mid) <= x:
            hi = mid
        else:
            lo = mid
    return special.reg_inc_beta(float(hi), float(n - hi + 1), rho)
