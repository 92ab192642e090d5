"""Minimal sample size under the two length criteria.

Both criteria are evaluated at the binding point (pi = pi0, q = q_min):
the expected covering length increases in pi and in q, and the assured
length probability decreases in them (up to discreteness), so the worst
case over the feasible region sits at that corner.  A coarse grid recheck
is available for the acknowledged wobble in q.

The criteria are not exactly monotone in n (discreteness makes them
oscillate near the threshold), so the search never trusts bisection alone:
an asymptotic pilot sizes the problem, exponential bracketing and bisection
find a candidate, and a confirming downward window scan locates the
smallest satisfying n whose predecessor fails, extending the window while
the pattern keeps flipping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import special
from .errors import SearchExhaustedError
from .evaluation import (
    assured_length_prob,
    cp_criterion_sums,
    expected_covering_length,
)
from .model import ModelConfig
from .privacy import PrivacySpec, q_min

SCAN_FLOOR = 2


@dataclass(frozen=True)
class DesignSpec:
    """Inputs of a sample-size problem.

    pi0: prior upper bound on the prevalence; gamma: disclosure tolerance
    (must exceed pi0); delta: confidence level; d: target interval length;
    lam: assurance tail probability, used by the assured criterion only.
    d >= 1 is accepted and trivially satisfiable since lengths never
    exceed 1.
    """

    pi0: float
    gamma: float
    delta: float
    d: float
    lam: float | None = None

    def __post_init__(self):
        PrivacySpec(self.pi0, self.gamma)  # validates and checks feasibility
        if not 0.0 < self.delta < 1.0:
            raise ValueError("confidence level delta must lie in (0, 1)")
        if not self.d > 0.0:
            raise ValueError("target length d must be positive")
        if self.lam is not None and not 0.0 < self.lam < 1.0:
            raise ValueError("assurance probability lam must lie in (0, 1)")

    @property
    def q(self) -> float:
        """Binding neutral probability q_min(pi0, gamma)."""
        return q_min(PrivacySpec(self.pi0, self.gamma))


@dataclass(frozen=True)
class SampleSizeResult:
    n_min: int
    criterion_value_at_n: float
    criterion_value_at_n_minus_1: float
    q_used: float
    scan_window: tuple[int, int]


def _pilot_n(spec: DesignSpec) -> int:
    """Asymptotic length-based starting scale; never trusted as an answer."""
    u = special.normal_quantile((1.0 + spec.delta) / 2.0)
    q = spec.q
    var_scale = spec.pi0 * (1.0 - spec.pi0) + q * (1.0 - q) / (2.0 * q - 1.0) ** 2
    return max(SCAN_FLOOR, math.ceil((2.0 * u) ** 2 * var_scale / spec.d ** 2))


def _minimal_n(spec: DesignSpec, value_at, values_at, satisfied,
               n_cap: int) -> SampleSizeResult:
    memo: dict[int, float] = {}

    def value(n: int) -> float:
        if n not in memo:
            memo[n] = value_at(n)
        return memo[n]

    def sat(n: int) -> bool:
        return satisfied(value(n))

    def evaluate_range(lo: int, hi: int) -> None:
        missing = [n for n in range(lo, hi + 1) if n not in memo]
        if missing:
            memo.update(values_at(missing))

    start = max(SCAN_FLOOR, _pilot_n(spec) // 4)

    if sat(start):
        # walk down for a failing endpoint; all-satisfying means the floor wins
        exp_lo = None
        n = start
        while n > SCAN_FLOOR:
            n = max(SCAN_FLOOR, n // 2)
            if not sat(n):
                exp_lo = n
                break
        if exp_lo is None:
            return SampleSizeResult(
                n_min=SCAN_FLOOR,
                criterion_value_at_n=value(SCAN_FLOOR),
                criterion_value_at_n_minus_1=value_at(SCAN_FLOOR - 1),
                q_used=spec.q,
                scan_window=(SCAN_FLOOR, SCAN_FLOOR),
            )
        hi = exp_lo * 2
        while not sat(hi):  # regained ground lost to oscillation
            hi *= 2
            if hi > n_cap:
                raise SearchExhaustedError(f"no satisfying n found below cap {n_cap}")
    else:
        exp_lo = start
        hi = start * 2
        while not sat(hi):
            exp_lo = hi
            hi *= 2
            if hi > n_cap:
                raise SearchExhaustedError(f"no satisfying n found below cap {n_cap}")

    lo = exp_lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sat(mid):
            hi = mid
        else:
            lo = mid
    n_star = hi

    # Confirming downward scan: the returned n must have a full window of
    # evaluated, non-satisfying predecessors (or hit the bracket's failing
    # endpoint), so bisection landing inside an oscillation zone cannot hide
    # a smaller satisfying onset.
    window = max(64, n_star // 100)
    scan_lo = max(exp_lo + 1, n_star - window)
    evaluate_range(scan_lo, n_star)
    while True:
        best = None
        for n in range(scan_lo, n_star + 1):
            if sat(n) and (n - 1 == exp_lo or not sat(n - 1)):
                best = n
                break
        if best is None:
            target = max(exp_lo + 1, scan_lo - window)
        else:
            target = max(exp_lo + 1, best - window)
        bottom_open = sat(scan_lo) and scan_lo - 1 > exp_lo
        if scan_lo <= target and not bottom_open:
            break
        new_lo = max(exp_lo + 1, min(target, scan_lo - window))
        evaluate_range(new_lo, scan_lo - 1)
        scan_lo = new_lo

    n_min = best
    return SampleSizeResult(
        n_min=n_min,
        criterion_value_at_n=value(n_min),
        criterion_value_at_n_minus_1=value_at(n_min - 1),
        q_used=spec.q,
        scan_window=(scan_lo, n_star),
    )


_BATCH_CHUNK = 400


def min_n_expected(spec: DesignSpec, *, n_cap: int = 1_000_000) -> SampleSizeResult:
    """Smallest n whose expected covering length at (pi0, q_min) is <= d."""
    q = spec.q

    def value_at(n: int) -> float:
        return expected_covering_length(ModelConfig(n=n, q=q), spec.delta, spec.pi0)

    def values_at(ns: list[int]) -> dict[int, float]:
        out = {}
        for i in range(0, len(ns), _BATCH_CHUNK):
            chunk = ns[i:i + _BATCH_CHUNK]
            sums = cp_criterion_sums(chunk, q, spec.delta, spec.pi0)
            out.update({n: sums[n][1] for n in chunk})
        return out

    return _minimal_n(spec, value_at, values_at, lambda v: v <= spec.d, n_cap)


def min_n_assured(spec: DesignSpec, *, n_cap: int = 1_000_000) -> SampleSizeResult:
    """Smallest n whose assured-length probability at (pi0, q_min) is >= 1 - lam."""
    if spec.lam is None:
        raise ValueError("the assured criterion requires lam")
    q = spec.q

    def value_at(n: int) -> float:
        return assured_length_prob(ModelConfig(n=n, q=q), spec.delta, spec.pi0, spec.d)

    def values_at(ns: list[int]) -> dict[int, float]:
        out = {}
        for i in range(0, len(ns), _BATCH_CHUNK):
            chunk = ns[i:i + _BATCH_CHUNK]
            sums = cp_criterion_sums(chunk, q, spec.delta, spec.pi0, d=spec.d)
            out.update({n: sums[n][2] / spec.delta for n in chunk})
        return out

    return _minimal_n(spec, value_at, values_at, lambda v: v >= 1.0 - spec.lam, n_cap)


def grid_violations(spec: DesignSpec, n: int, criterion: str,
                    pi_points: int = 5, q_points: int = 5):
    """Recheck a chosen n on a coarse grid over the feasible (pi, q) region.

    Returns (pi, q, value) triples where the criterion fails, hedging
    against the non-monotone wobble in q.  Empty list means no violation
    found on the grid.
    """
    if criterion not in ("expected", "assured"):
        raise ValueError("criterion must be 'expected' or 'assured'")
    if criterion == "assured" and spec.lam is None:
        raise ValueError("the assured criterion requires lam")
    q_lo = spec.q
    violations = []
    for i in range(1, pi_points + 1):
        pi = spec.pi0 * i / pi_points
        for j in range(q_points):
            q = q_lo + (0.5 - q_lo) * j / q_points
            config = ModelConfig(n=n, q=q)
            if criterion == "expected":
                val = expected_covering_length(config, spec.delta, pi)
                if val > spec.d:
                    violations.append((pi, q, val))
            else:
                val = assured_length_prob(config, spec.delta, pi, spec.d)
                if val < 1.0 - spec.lam:
                    violations.append((pi, q, val))
    return violations
