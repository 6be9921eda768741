"""Batch covariance estimation.

The estimator is the one-pass form

    C = (1/(n-1)) * (D^T D - (1/n) (1^T D)^T (1^T D))

evaluated in the widest native float type, then symmetrised and returned as
float64.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from deep_coral.core.matrix import WIDE_FLOAT, Matrix, as_matrix, frozen
from deep_coral.diagnostics.errors import DegenerateBatchError, NonFiniteError

# Allowed asymmetry before averaging, relative to the largest entry (floor 1).
SYMMETRY_TOL = 1e-10


@dataclass(slots=True, frozen=True, eq=False)
class Covariance:
    """A d x d symmetric sample covariance matrix (read-only)."""

    dim: int
    matrix: Matrix


def covariance(d: ArrayLike) -> Covariance:
    """Sample covariance of the rows of `d`.

    Raises:
        DegenerateBatchError: fewer than two rows.
        NonFiniteError: non-finite input, or a result that is non-finite or
            asymmetric beyond `SYMMETRY_TOL`.
    """

    data = as_matrix(d, name="D")
    n, dim = data.shape
    if n < 2:
        raise DegenerateBatchError(
            f"covariance needs at least 2 rows, got {n} (n-1 must be positive)"
        )

    wide = data.astype(WIDE_FLOAT)
    col_sum = wide.sum(axis=0)
    gram = wide.T @ wide
    c = (gram - np.outer(col_sum, col_sum) / n) / (n - 1)

    if not np.all(np.isfinite(c)):
        raise NonFiniteError("covariance overflowed to non-finite values")

    scale = max(1.0, float(np.max(np.abs(c))))
    asymmetry = float(np.max(np.abs(c - c.T)))
    if asymmetry > SYMMETRY_TOL * scale:
        raise NonFiniteError(
            f"covariance asymmetry {asymmetry:.3e} exceeds tolerance"
        )

    sym = ((c + c.T) / 2).astype(np.float64)
    return Covariance(dim=dim, matrix=frozen(sym))


def feature_spread(d: ArrayLike) -> float:
    """Total variance (trace of the covariance) of the rows of `d`.

    A value near zero means the features have collapsed to a single point,
    which makes the CORAL loss trivially small.
    """

    return float(np.trace(covariance(d).matrix))


__all__ = ["Covariance", "SYMMETRY_TOL", "covariance", "feature_spread"]
