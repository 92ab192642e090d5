"""Exception hierarchy for the crosswise package."""


class CrosswiseError(Exception):
    """Base class for all package-specific errors."""


class NumericError(CrosswiseError):
    """An iterative kernel routine failed to converge within its cap.

    Raised instead of silently returning a best-effort value.
    """


class InfeasibleDesignError(CrosswiseError):
    """The privacy constraint cannot be met (gamma <= pi0)."""


class SearchExhaustedError(CrosswiseError):
    """A sample-size search exceeded its configured cap."""
