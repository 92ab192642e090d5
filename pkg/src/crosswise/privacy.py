"""Privacy-protection degree of a crosswise design.

A respondent's exposure is measured by the conditional probabilities that
the sensitive answer was YES given the observed report.  Bounding the larger
of the two by gamma yields a lower limit on the admissible neutral
probability q; designs pick q from [q_min, 0.5).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InfeasibleDesignError


@dataclass(frozen=True)
class PrivacySpec:
    """Prior prevalence bound pi0 and disclosure tolerance gamma.

    Feasibility requires gamma > pi0: when the tolerated disclosure
    probability does not exceed the prevalence bound, no q < 0.5 can protect
    respondents and construction fails.
    """

    pi0: float
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.pi0 < 1.0:
            raise ValueError("pi0 must lie in (0, 1)")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.gamma <= self.pi0:
            raise InfeasibleDesignError(
                f"privacy constraint infeasible: gamma={self.gamma} <= pi0={self.pi0}"
            )


def disclosure_probabilities(pi: float, q: float) -> tuple[float, float]:
    """(p11, p10): P{sensitive answer YES | report} for reports 1 and 0.

    Bayes on the crosswise report.  p10 >= p11 for q < 0.5, so p10 is the
    binding exposure.  Degenerate prevalences 0 and 1 are rejected, as the
    conditioning events then carry no information.
    """
    if not 0.0 < pi < 1.0:
        raise ValueError("pi must lie strictly in (0, 1)")
    if not 0.0 < q < 0.5:
        raise ValueError("q must lie in (0, 0.5)")
    p11 = pi * q / (pi * q + (1.0 - pi) * (1.0 - q))
    p10 = pi * (1.0 - q) / (pi * (1.0 - q) + (1.0 - pi) * q)
    return p11, p10


def q_min(spec: PrivacySpec) -> float:
    """Smallest neutral probability keeping p10 <= gamma for all pi <= pi0.

    The exposure p10 increases in pi and decreases in q, so the constraint
    binds at pi = pi0 and is tight at the returned q.
    """
    pi0, gamma = spec.pi0, spec.gamma
    return pi0 * (1.0 - gamma) / (gamma * (1.0 - 2.0 * pi0) + pi0)
