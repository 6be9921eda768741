from collections.abc import Callable

import numpy as np
import pytest

from deep_coral.core.loss import (
    coral_distance,
    coral_grad,
    coral_loss,
    coral_loss_and_grad,
)
from deep_coral.diagnostics.errors import DegenerateBatchError, DimensionMismatchError


def _central_difference(
    f: Callable[[np.ndarray], float], x: np.ndarray, eps: float = 1e-5
) -> np.ndarray:
    grad = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[idx] += eps
        minus[idx] -= eps
        grad[idx] = (f(plus) - f(minus)) / (2 * eps)
    return grad


def test_identical_inputs_give_zero_loss_and_gradients() -> None:
    d = np.random.default_rng(0).normal(size=(6, 3))

    assert coral_loss(d, d) == 0.0
    grad = coral_grad(d, d)
    assert not np.any(grad.grad_source)
    assert not np.any(grad.grad_target)


def test_hand_evaluated_example() -> None:
    d_s = [[1.0], [-1.0]]
    d_t = [[0.0], [0.0]]

    value, grad = coral_loss_and_grad(d_s, d_t)

    assert value == 1.0
    assert np.array_equal(grad.grad_source, [[2.0], [-2.0]])
    assert np.array_equal(grad.grad_target, [[0.0], [0.0]])
    assert coral_distance(d_s, d_t) == 1.0


def test_loss_is_symmetric_and_non_negative() -> None:
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.uniform(-2, 2, size=(int(rng.integers(2, 10)), 4))
        b = rng.uniform(-2, 2, size=(int(rng.integers(2, 10)), 4))
        assert coral_loss(a, b) == pytest.approx(coral_loss(b, a), abs=1e-15)
        assert coral_loss(a, b) >= 0.0
        assert coral_distance(a, b) == coral_loss(a, b)


def test_swapping_domains_swaps_gradient_roles() -> None:
    # With equal row counts, the gradient wrt a matrix does not depend on
    # which side of the loss it sits on.
    rng = np.random.default_rng(2)
    a = rng.normal(size=(5, 3))
    b = rng.normal(size=(5, 3))

    forward_grad = coral_grad(a, b)
    swapped_grad = coral_grad(b, a)

    assert np.allclose(forward_grad.grad_source, swapped_grad.grad_target, atol=1e-15)
    assert np.allclose(forward_grad.grad_target, swapped_grad.grad_source, atol=1e-15)


def test_gradients_match_finite_differences() -> None:
    rng = np.random.default_rng(3)
    d_s = rng.uniform(-2, 2, size=(4, 3))
    d_t = rng.uniform(-2, 2, size=(5, 3))

    grad = coral_grad(d_s, d_t)
    num_s = _central_difference(lambda x: coral_loss(x, d_t), d_s)
    num_t = _central_difference(lambda x: coral_loss(d_s, x), d_t)

    assert grad.grad_source.shape == (4, 3)
    assert grad.grad_target.shape == (5, 3)
    assert np.allclose(grad.grad_source, num_s, rtol=1e-5, atol=1e-7)
    assert np.allclose(grad.grad_target, num_t, rtol=1e-5, atol=1e-7)


def test_unequal_batch_sizes_are_supported() -> None:
    rng = np.random.default_rng(4)
    value, grad = coral_loss_and_grad(rng.normal(size=(3, 2)), rng.normal(size=(11, 2)))
    assert value > 0
    assert grad.grad_target.shape == (11, 2)


def test_dimension_mismatch_and_degenerate_batches() -> None:
    with pytest.raises(DimensionMismatchError):
        coral_loss(np.zeros((3, 2)), np.zeros((3, 3)))
    with pytest.raises(DegenerateBatchError):
        coral_loss(np.zeros((1, 2)), np.zeros((3, 2)))
