"""Coded exception hierarchy.

Numerical code raises; the CLI converts the exception into an `Issue` and an
exit code. Codes are registered in `docs/issue-codes.md`.
"""

from enum import IntEnum
from typing import ClassVar

from deep_coral.diagnostics.issue import Issue, Severity


class ExitCode(IntEnum):
    """Process exit codes. Stable across versions."""

    OK = 0
    CONFIG = 1
    IO = 2
    DIVERGENCE = 3
    GRADCHECK = 4


class CoralError(Exception):
    """Base class for every failure the toolkit reports."""

    code: ClassVar[str] = "COR001"
    exit_code: ClassVar[ExitCode] = ExitCode.CONFIG

    def __init__(
        self,
        message: str,
        *,
        file: str | None = None,
        line: int | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line

    def to_issue(self) -> Issue:
        return Issue(
            code=self.code,
            severity=Severity.ERROR,
            message=self.message,
            file=self.file,
            line=self.line,
        )


# coral-core


class DegenerateBatchError(CoralError):
    """A batch with fewer than two rows has no sample covariance."""

    code = "COR010"


class NonFiniteError(CoralError):
    """NaN or infinity in an input, an intermediate or an update."""

    code = "COR020"
    exit_code = ExitCode.DIVERGENCE


class DimensionMismatchError(CoralError):
    code = "COR030"


# net


class BadArchitectureError(CoralError):
    code = "NET100"


class BadLabelError(CoralError):
    code = "NET110"


class StaleForwardError(CoralError):
    """backward() was given a forward pass computed with other parameters."""

    code = "NET120"


# trainer


class LengthMismatchError(CoralError):
    code = "TRN200"


class ProbeDivergedError(CoralError):
    code = "TRN210"
    exit_code = ExitCode.DIVERGENCE


class DivergedError(CoralError):
    """Training produced a non-finite loss and was aborted."""

    code = "TRN220"
    exit_code = ExitCode.DIVERGENCE


class TrainConfigError(CoralError):
    code = "TRN230"


class MetricsError(CoralError):
    """A logged metrics row breaks its own bookkeeping."""

    code = "TRN240"


# data


class BadSpecError(CoralError):
    code = "DAT300"


class DataParseError(CoralError):
    code = "DAT310"
    exit_code = ExitCode.IO


class LabelOutOfRangeError(CoralError):
    code = "DAT320"
    exit_code = ExitCode.IO


class BatchTooLargeError(CoralError):
    code = "DAT330"


class BatchTooSmallError(CoralError):
    code = "DAT340"


# config / io


class ConfigError(CoralError):
    code = "CFG400"


class DataIOError(CoralError):
    """A file could not be read or written."""

    code = "CLI500"
    exit_code = ExitCode.IO


__all__ = [
    "BadArchitectureError",
    "BadLabelError",
    "BadSpecError",
    "BatchTooLargeError",
    "BatchTooSmallError",
    "ConfigError",
    "CoralError",
    "DataIOError",
    "DataParseError",
    "DegenerateBatchError",
    "DimensionMismatchError",
    "DivergedError",
    "ExitCode",
    "LabelOutOfRangeError",
    "LengthMismatchError",
    "MetricsError",
    "NonFiniteError",
    "ProbeDivergedError",
    "StaleForwardError",
    "TrainConfigError",
]
