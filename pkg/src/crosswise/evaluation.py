"""Exact operating characteristics of the interval constructions.

Everything here is computed by summing binomial masses over counts, never
simulated.  Membership of a count in the covering set uses strict
inequalities (lower < pi < upper); boundary hits count as non-coverage.

Two length-criterion summaries are provided:

* ``assured_length_prob`` restricts to covering intervals and divides the
  mass of short ones by the confidence level.  This is the quantity the
  sample-size criteria use; it may exceed 1, and the raw mass is exposed as
  ``covering_short_mass``.
* ``short_length_prob`` is the plain probability that the interval is short,
  regardless of coverage.  This is what published curve data for the length
  criterion tracks.

For the exact method the covering set is a contiguous count range located by
binary search on the monotone interval endpoints, so single-point
evaluations stay cheap even for n in the tens of thousands.  Curves
precompute the full endpoint table once per (n, q, delta) and reuse it
across the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .asymptotic import ap_bounds, wp_bounds
from .exact import _check_delta, cp_bounds
from .model import ModelConfig, rho_from_pi

METHODS = ("cp", "wp", "ap")


@dataclass(frozen=True)
class EvaluationPoint:
    """Exact operating characteristics at one true prevalence."""

    pi: float
    coverage: float
    expected_covering_length: float
    assured_length_prob: float | None = None
    covering_short_mass: float | None = None
    short_length_prob: float | None = None


@dataclass(frozen=True)
class CoverageCurve:
    method: str
    grid: tuple[EvaluationPoint, ...]


@dataclass(frozen=True)
class IntervalTable:
    """Clipped interval endpoints for every count 0..n at one (n, q, delta)."""

    config: ModelConfig
    delta: float
    method: str
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower.setflags(write=False)
        self.upper.setflags(write=False)

    @property
    def lengths(self) -> np.ndarray:
        return self.upper - self.lower


def interval_table(config: ModelConfig, delta: float, method: str = "cp") -> IntervalTable:
    """Endpoints of the requested interval at every count, computed once."""
    delta = _check_delta(delta)
    counts = np.arange(config.n + 1, dtype=np.float64)
    if method == "cp":
        lower, upper, _, _ = cp_bounds(config, delta, counts)
    elif method == "wp":
        lower, upper = wp_bounds(config, delta, counts)
    elif method == "ap":
        lower, upper = ap_bounds(config, delta, counts)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return IntervalTable(config=config, delta=delta, method=method,
                         lower=lower, upper=upper)


def _check_pi(pi: float) -> float:
    pi = float(pi)
    if not 0.0 < pi < 1.0:
        raise ValueError("pi must lie strictly in (0, 1)")
    return pi


def _fsum(values: np.ndarray) -> float:
    return math.fsum(values.tolist())


def _pmf_over(config: ModelConfig, pi: float, counts: np.ndarray) -> np.ndarray:
    rho = rho_from_pi(pi, config.q)
    return np.exp(special.log_binom_pmf(config.n, counts, rho))


def _covering_block(config: ModelConfig, delta: float, pi: float):
    """Counts, endpoints and covering mask for a block certain to contain C(pi).

    Both endpoints are nonincreasing in the count, so the covering set is the
    contiguous intersection of one up-set and one down-set.  A normal
    approximation brackets it, one vectorized pass computes the endpoints,
    and the monotone edge conditions (lower >= pi on the left, upper <= pi
    on the right, unless the block hits 0 or n) certify containment; the
    block doubles outward on the rare miss.
    """
    delta = _check_delta(delta)
    pi = _check_pi(pi)
    n = config.n
    rho = rho_from_pi(pi, config.q)
    u = special.normal_quantile((1.0 + delta) / 2.0)
    half = u * math.sqrt(n * rho * (1.0 - rho)) + u * u + 10.0
    z_lo = max(0, math.floor(n * rho - half))
    z_hi = min(n, math.ceil(n * rho + half))
    while True:
        counts = np.arange(z_lo, z_hi + 1, dtype=np.float64)
        lower, upper, _, _ = cp_bounds(config, delta, counts)
        grow = max(64, z_hi - z_lo + 1)
        left_ok = z_lo == 0 or lower[0] >= pi
        right_ok = z_hi == n or upper[-1] <= pi
        if left_ok and right_ok:
            return counts, lower, upper
        if not left_ok:
            z_lo = max(0, z_lo - grow)
        if not right_ok:
            z_hi = min(n, z_hi + grow)


def covering_count_range(config: ModelConfig, delta: float, pi: float):
    """Count range whose exact intervals strictly cover pi, or None."""
    counts, lower, upper = _covering_block(config, delta, pi)
    mask = (lower < pi) & (pi < upper)
    if not mask.any():
        return None
    hits = np.flatnonzero(mask)
    return int(counts[hits[0]]), int(counts[hits[-1]])


def cp_criterion_sums(n_values, q: float, delta: float, pi: float,
                      d: float | None = None) -> dict[int, tuple[float, float, float]]:
    """Design-criterion sums for many sample sizes in one kernel pass.

    For each n returns (coverage, expected covering length, covering-and-short
    mass); the last is nan when no d is given.  All (n, count) pairs across
    the batch share one vectorized quantile solve, and per-n results equal
    the single-n evaluation exactly.  Intended for the sample-size window
    scans, which probe hundreds of consecutive n.
    """
    delta = _check_delta(delta)
    pi = _check_pi(pi)
    if d is not None:
        d = _check_d(d)
    n_values = [int(n) for n in n_values]
    rho = rho_from_pi(pi, q)
    u = special.normal_quantile((1.0 + delta) / 2.0)
    slope = 1.0 - 2.0 * q
    alpha = (1.0 - delta) / 2.0

    segments = []
    for n in n_values:
        half = u * math.sqrt(n * rho * (1.0 - rho)) + u * u + 10.0
        z_lo = max(0, math.floor(n * rho - half))
        z_hi = min(n, math.ceil(n * rho + half))
        segments.append((n, z_lo, z_hi))

    counts = np.concatenate(
        [np.arange(z_lo, z_hi + 1, dtype=np.float64) for _, z_lo, z_hi in segments]
    )
    ns = np.concatenate(
        [np.full(z_hi - z_lo + 1, float(n)) for n, z_lo, z_hi in segments]
    )
    rho_lo = np.zeros_like(counts)
    rho_hi = np.ones_like(counts)
    pos = counts > 0
    rho_lo[pos] = special.inv_reg_inc_beta(counts[pos], ns[pos] - counts[pos] + 1.0, alpha)
    below = counts < ns
    rho_hi[below] = special.inv_reg_inc_beta(
        counts[below] + 1.0, ns[below] - counts[below], 1.0 - alpha
    )
    lower = np.clip((1.0 - q - rho_hi) / slope, 0.0, 1.0)
    upper = np.clip((1.0 - q - rho_lo) / slope, 0.0, 1.0)
    lengths = upper - lower
    pmf = np.exp(special._log_pmf_raw(ns, counts, rho))

    results = {}
    offset = 0
    for n, z_lo, z_hi in segments:
        size = z_hi - z_lo + 1
        sl = slice(offset, offset + size)
        offset += size
        left_ok = z_lo == 0 or lower[sl][0] >= pi
        right_ok = z_hi == n or upper[sl][-1] <= pi
        if not (left_ok and right_ok):
            # block missed the covering set; redo this n standalone
            _, seg_len, seg_pmf = _cp_covering_arrays(
                ModelConfig(n=n, q=q), delta, pi
            )
            cov = _fsum(seg_pmf)
            exp_len = _fsum(seg_len * seg_pmf)
            short = _fsum(seg_pmf[seg_len <= d]) if d is not None else math.nan
        else:
            mask = (lower[sl] < pi) & (pi < upper[sl])
            seg_pmf = pmf[sl]
            cov = _fsum(seg_pmf[mask])
            exp_len = _fsum((lengths[sl] * seg_pmf)[mask])
            if d is not None:
                short = _fsum(seg_pmf[mask & (lengths[sl] <= d)])
            else:
                short = math.nan
        results[n] = (cov, exp_len, short)
    return results


def _cp_covering_arrays(config: ModelConfig, delta: float, pi: float):
    """(counts, lengths, pmf) over the covering range; empty arrays if none."""
    counts, lower, upper = _covering_block(config, delta, pi)
    mask = (lower < pi) & (pi < upper)
    if not mask.any():
        empty = np.empty(0)
        return empty, empty, empty
    counts = counts[mask]
    lengths = (upper - lower)[mask]
    return counts, lengths, _pmf_over(config, pi, counts)


def coverage(config: ModelConfig, delta: float, method: str, pi: float) -> float:
    """Exact probability that the method's interval strictly covers pi."""
    pi = _check_pi(pi)
    if method == "cp":
        counts, _, pmf = _cp_covering_arrays(config, delta, pi)
        return _fsum(pmf)
    table = interval_table(config, delta, method)
    covers = (table.lower < pi) & (pi < table.upper)
    counts = np.arange(config.n + 1, dtype=np.float64)
    return _fsum(_pmf_over(config, pi, counts[covers]))


def expected_covering_length(config: ModelConfig, delta: float, pi: float) -> float:
    """Expected exact-interval length restricted to intervals covering pi."""
    _, lengths, pmf = _cp_covering_arrays(config, delta, pi)
    return _fsum(lengths * pmf)


def assured_length_prob(config: ModelConfig, delta: float, pi: float, d: float) -> float:
    """Confidence-level-normalized mass of covering intervals with length <= d.

    Follows the displayed normalization of the design criterion: the raw
    covering-and-short mass divided by delta.  Values can exceed 1; see
    ``covering_short_mass`` in curve output for the raw mass and
    ``short_length_prob`` for the unconditional probability.
    """
    d = _check_d(d)
    _, lengths, pmf = _cp_covering_arrays(config, delta, pi)
    return _fsum(pmf[lengths <= d]) / delta


def short_length_prob(config: ModelConfig, delta: float, pi: float, d: float,
                      method: str = "cp") -> float:
    """Plain probability that the interval's length is <= d (any coverage)."""
    pi = _check_pi(pi)
    d = _check_d(d)
    table = interval_table(config, delta, method)
    counts = np.arange(config.n + 1, dtype=np.float64)
    short = table.lengths <= d
    return _fsum(_pmf_over(config, pi, counts[short]))


def _check_d(d: float) -> float:
    d = float(d)
    # d >= 1 is allowed and trivially satisfied since lengths never exceed 1.
    if not d > 0.0:
        raise ValueError("length bound d must be positive")
    return d


def curve(config: ModelConfig, delta: float, method: str, grid,
          d: float | None = None) -> CoverageCurve:
    """Operating characteristics over a strictly increasing prevalence grid.

    The endpoint table is computed once and reused for every grid point, so
    the cost is one table plus one binomial-mass pass per point.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("prevalence grid must not be empty")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise ValueError("grid values must lie strictly in (0, 1)")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid values must be strictly increasing")
    if d is not None:
        d = _check_d(d)
    table = interval_table(config, delta, method)
    lengths = table.lengths
    counts = np.arange(config.n + 1, dtype=np.float64)
    short = lengths <= d if d is not None else None

    points = []
    for pi in grid:
        pmf = _pmf_over(config, float(pi), counts)
        covers = (table.lower < pi) & (pi < table.upper)
        cov = _fsum(pmf[covers])
        exp_len = _fsum((lengths * pmf)[covers])
        if d is None:
            points.append(EvaluationPoint(
                pi=float(pi), coverage=cov, expected_covering_length=exp_len))
        else:
            short_mass = _fsum(pmf[covers & short])
            points.append(EvaluationPoint(
                pi=float(pi),
                coverage=cov,
                expected_covering_length=exp_len,
                assured_length_prob=short_mass / delta,
                covering_short_mass=short_mass,
                short_length_prob=_fsum(pmf[short]),
            ))
    return CoverageCurve(method=method, grid=tuple(points))
