import numpy as np
import pytest

from deep_coral.core.matrix import as_matrix, frobenius_sq
from deep_coral.diagnostics.errors import DimensionMismatchError, NonFiniteError


def test_frobenius_sq_examples() -> None:
    assert frobenius_sq(np.zeros((3, 2))) == 0.0
    assert frobenius_sq([[1.0, 2.0], [3.0, 4.0]]) == 30.0
    assert frobenius_sq(np.eye(5)) == 5.0


def test_frobenius_sq_rejects_non_finite() -> None:
    with pytest.raises(NonFiniteError):
        frobenius_sq([[np.inf]])


@pytest.mark.parametrize("bad", [[1.0, 2.0], [[]], np.zeros((0, 3)), np.zeros((2, 2, 2))])
def test_as_matrix_rejects_bad_shapes(bad: object) -> None:
    with pytest.raises(DimensionMismatchError):
        as_matrix(bad)  # type: ignore[arg-type]


def test_as_matrix_returns_float64() -> None:
    m = as_matrix([[1, 2], [3, 4]])
    assert m.dtype == np.float64
    assert m.shape == (2, 2)
