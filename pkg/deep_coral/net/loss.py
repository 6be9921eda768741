"""Softmax cross-entropy classification loss."""

import numpy as np
from numpy.typing import ArrayLike

from deep_coral.core.matrix import Matrix, as_matrix
from deep_coral.diagnostics.errors import DimensionMismatchError
from deep_coral.net.labels import as_labels


def log_softmax(logits: ArrayLike) -> Matrix:
    z = as_matrix(logits, name="logits")
    shifted = z - z.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits: ArrayLike) -> Matrix:
    """Row-wise softmax, computed with max-logit subtraction."""

    return np.exp(log_softmax(logits))


def class_loss_and_grad(logits: ArrayLike, labels: ArrayLike) -> tuple[float, Matrix]:
    """Mean cross-entropy over the batch and its gradient wrt the logits.

    The gradient is `(softmax(logits) - onehot(labels)) / n`.
    """

    z = as_matrix(logits, name="logits")
    n, k = z.shape
    y = as_labels(labels, num_classes=k)
    if y.shape[0] != n:
        raise DimensionMismatchError(f"{y.shape[0]} labels for {n} logit rows")

    log_probs = log_softmax(z)
    rows = np.arange(n)
    loss = float(-log_probs[rows, y].mean())

    grad = np.exp(log_probs)
    grad[rows, y] -= 1.0
    grad /= n
    return loss, grad


def predict(logits: ArrayLike) -> np.ndarray:
    """Argmax class per row; ties go to the lowest class index."""

    return np.argmax(as_matrix(logits, name="logits"), axis=1)


__all__ = ["class_loss_and_grad", "log_softmax", "predict", "softmax"]
