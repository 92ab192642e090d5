"""Exact confidence intervals and sample-size design for crosswise-model surveys.

The crosswise design hides a sensitive YES/NO answer behind an independent
neutral question: respondents report whether the two answers coincide.  This
package provides the exact (finite-sample) equitailed confidence interval for
the sensitive prevalence, the two classical asymptotic intervals, exact
coverage/length evaluation, privacy-protection algebra, and minimal sample
sizes under expected-length and assured-length criteria.
"""

from .asymptotic import UnbiasedEstimate, ap_interval, unbiased_estimate, wp_interval
from .design import (
    DesignSpec,
    SampleSizeResult,
    grid_violations,
    min_n_assured,
    min_n_expected,
)
from .errors import (
    CrosswiseError,
    InfeasibleDesignError,
    NumericError,
    SearchExhaustedError,
)
from .evaluation import (
    CoverageCurve,
    EvaluationPoint,
    IntervalTable,
    assured_length_prob,
    coverage,
    covering_count_range,
    curve,
    expected_covering_length,
    interval_table,
    short_length_prob,
)
from .exact import IntervalEstimate, cp_bounds, cp_interval, cp_length
from .model import (
    EstimatorDistribution,
    ModelConfig,
    estimator_cdf,
    estimator_distribution,
    mle,
    pi_from_rho,
    rho_from_pi,
)
from .privacy import PrivacySpec, disclosure_probabilities, q_min

__version__ = "0.1.0"

__all__ = [
    "CoverageCurve",
    "CrosswiseError",
    "DesignSpec",
    "EstimatorDistribution",
    "EvaluationPoint",
    "InfeasibleDesignError",
    "IntervalEstimate",
    "IntervalTable",
    "ModelConfig",
    "NumericError",
    "PrivacySpec",
    "SampleSizeResult",
    "SearchExhaustedError",
    "UnbiasedEstimate",
    "ap_interval",
    "assured_length_prob",
    "coverage",
    "covering_count_range",
    "cp_bounds",
    "cp_interval",
    "cp_length",
    "curve",
    "disclosure_probabilities",
    "estimator_cdf",
    "estimator_distribution",
    "expected_covering_length",
    "grid_violations",
    "interval_table",
    "min_n_assured",
    "min_n_expected",
    "mle",
    "pi_from_rho",
    "q_min",
    "rho_from_pi",
    "short_length_prob",
    "unbiased_estimate",
    "wp_interval",
]
