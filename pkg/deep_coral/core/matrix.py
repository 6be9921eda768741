"""Dense matrix helpers.

A `Matrix` is a two-dimensional float64 numpy array with rows = examples and
cols = feature dimensions. Everything in `deep_coral.core` accepts any
array-like and validates it through `as_matrix`.
"""

from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from deep_coral.diagnostics.errors import DimensionMismatchError, NonFiniteError

type Matrix = NDArray[np.float64]
type Vector = NDArray[np.float64]

# Widest native real type; only used for accumulation.
WIDE_FLOAT: Any = np.longdouble


def as_matrix(values: ArrayLike, *, name: str = "matrix") -> Matrix:
    """Return `values` as a validated float64 matrix.

    Raises:
        DimensionMismatchError: not two-dimensional, or an empty axis.
        NonFiniteError: any entry is NaN or infinite.
    """

    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatchError(
            f"{name} must be two-dimensional, got {arr.ndim} dimension(s)"
        )
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatchError(f"{name} must have rows >= 1 and cols >= 1")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def frozen(arr: NDArray[Any]) -> NDArray[Any]:
    """Mark an array read-only and return it."""

    arr.flags.writeable = False
    return arr


def frobenius_sq(m: ArrayLike) -> float:
    """Squared Frobenius norm: the sum of squared entries."""

    mat = as_matrix(m, name="M")
    wide = mat.astype(WIDE_FLOAT)
    return float(np.sum(wide * wide))


__all__ = ["Matrix", "Vector", "WIDE_FLOAT", "as_matrix", "frobenius_sq", "frozen"]
