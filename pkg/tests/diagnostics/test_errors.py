import pytest

from deep_coral.diagnostics.errors import (
    CoralError,
    DataIOError,
    DataParseError,
    DegenerateBatchError,
    DivergedError,
    ExitCode,
    MetricsError,
    NonFiniteError,
    TrainConfigError,
)
from deep_coral.diagnostics.issue import Severity


def test_exit_codes_are_stable() -> None:
    assert [int(c) for c in ExitCode] == [0, 1, 2, 3, 4]


@pytest.mark.parametrize(
    ("error", "exit_code"),
    [
        (DegenerateBatchError("x"), ExitCode.CONFIG),
        (TrainConfigError("x"), ExitCode.CONFIG),
        (DataParseError("x"), ExitCode.IO),
        (DataIOError("x"), ExitCode.IO),
        (NonFiniteError("x"), ExitCode.DIVERGENCE),
        (DivergedError("x"), ExitCode.DIVERGENCE),
        (MetricsError("x"), ExitCode.CONFIG),
    ],
)
def test_error_exit_codes(error: CoralError, exit_code: ExitCode) -> None:
    assert error.exit_code is exit_code


def test_error_converts_to_located_issue() -> None:
    err = DataParseError("invalid number", file="source.csv", line=7)

    issue = err.to_issue()

    assert issue.code == "DAT310"
    assert issue.severity is Severity.ERROR
    assert issue.pretty() == "source.csv:7: ERROR DAT310: invalid number"
    assert str(err) == "invalid number"
