"""Finite-difference verification of the analytic gradients."""

from deep_coral.gradcheck.finite_difference import (
    GradientError,
    central_difference,
    compare_gradients,
)
from deep_coral.gradcheck.suite import CheckResult, GradcheckReport, run_gradcheck

__all__ = [
    "CheckResult",
    "GradcheckReport",
    "GradientError",
    "central_difference",
    "compare_gradients",
    "run_gradcheck",
]
