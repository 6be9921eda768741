"""Matrix primitives, batch covariance and the CORAL loss with its gradients."""

from deep_coral.core.covariance import Covariance, covariance, feature_spread
from deep_coral.core.loss import (
    CoralGrad,
    coral_distance,
    coral_grad,
    coral_loss,
    coral_loss_and_grad,
)
from deep_coral.core.matrix import Matrix, Vector, as_matrix, frobenius_sq

__all__ = [
    "CoralGrad",
    "Covariance",
    "Matrix",
    "Vector",
    "as_matrix",
    "coral_distance",
    "coral_grad",
    "coral_loss",
    "coral_loss_and_grad",
    "covariance",
    "feature_spread",
    "frobenius_sq",
]
