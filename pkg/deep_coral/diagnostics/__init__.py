"""Diagnostics: Issues and the coded exception hierarchy."""

from deep_coral.diagnostics.errors import CoralError, ExitCode
from deep_coral.diagnostics.issue import (
    Issue,
    Severity,
    issue_sort_key,
    validate_issue_code,
)

__all__ = [
    "CoralError",
    "ExitCode",
    "Issue",
    "Severity",
    "issue_sort_key",
    "validate_issue_code",
]
