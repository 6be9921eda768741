"""CORAL loss and its analytic gradients.

    loss = (1 / (4 d^2)) * ||C_S - C_T||_F^2

    dloss/dD_S =  (1 / (d^2 (n_S - 1))) * (D_S - 1 mean(D_S)) (C_S - C_T)
    dloss/dD_T = -(1 / (d^2 (n_T - 1))) * (D_T - 1 mean(D_T)) (C_S - C_T)

Source and target batches may have different row counts; each side uses its
own n.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from deep_coral.core.covariance import covariance
from deep_coral.core.matrix import Matrix, as_matrix, frobenius_sq, frozen
from deep_coral.diagnostics.errors import DimensionMismatchError, NonFiniteError


@dataclass(slots=True, frozen=True, eq=False)
class CoralGrad:
    """Gradients of the CORAL loss with respect to both feature matrices."""

    grad_source: Matrix
    grad_target: Matrix


def _pair(d_s: ArrayLike, d_t: ArrayLike) -> tuple[Matrix, Matrix]:
    source = as_matrix(d_s, name="D_S")
    target = as_matrix(d_t, name="D_T")
    if source.shape[1] != target.shape[1]:
        raise DimensionMismatchError(
            "D_S and D_T must have the same feature dimension, got "
            f"{source.shape[1]} and {target.shape[1]}"
        )
    return source, target


def _centered(d: Matrix) -> Matrix:
    n = d.shape[0]
    return d - np.ones((n, 1)) @ (d.sum(axis=0, keepdims=True) / n)


def _cov_diff(source: Matrix, target: Matrix) -> Matrix:
    return covariance(source).matrix - covariance(target).matrix


def coral_loss(d_s: ArrayLike, d_t: ArrayLike) -> float:
    """CORAL loss between source and target feature matrices."""

    source, target = _pair(d_s, d_t)
    dim = source.shape[1]
    return frobenius_sq(_cov_diff(source, target)) / (4 * dim * dim)


def coral_grad(d_s: ArrayLike, d_t: ArrayLike) -> CoralGrad:
    """Analytic gradient of `coral_loss` with respect to D_S and D_T."""

    return coral_loss_and_grad(d_s, d_t)[1]


def coral_loss_and_grad(d_s: ArrayLike, d_t: ArrayLike) -> tuple[float, CoralGrad]:
    """Loss value and gradients from one pair of covariance evaluations."""

    source, target = _pair(d_s, d_t)
    n_s, dim = source.shape
    n_t = target.shape[0]

    diff = _cov_diff(source, target)
    value = frobenius_sq(diff) / (4 * dim * dim)

    grad_source = (_centered(source) @ diff) / (dim * dim * (n_s - 1))
    grad_target = -(_centered(target) @ diff) / (dim * dim * (n_t - 1))

    if not (np.all(np.isfinite(grad_source)) and np.all(np.isfinite(grad_target))):
        raise NonFiniteError("CORAL gradient contains non-finite entries")

    return value, CoralGrad(
        grad_source=frozen(grad_source), grad_target=frozen(grad_target)
    )


def coral_distance(d_s: ArrayLike, d_t: ArrayLike) -> float:
    """Read-only domain discrepancy monitor; the same quantity as `coral_loss`.

    Callers use this for reporting only; it never feeds a parameter update.
    """

    return coral_loss(d_s, d_t)


__all__ = [
    "CoralGrad",
    "coral_distance",
    "coral_grad",
    "coral_loss",
    "coral_loss_and_grad",
]
