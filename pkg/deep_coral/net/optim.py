"""SGD with momentum, weight decay and per-layer learning-rate multipliers.

    v     <- momentum * v - lr * lr_multiplier * (grad + weight_decay * param)
    param <- param + v

Weight decay applies to weights only, never to biases.
"""

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Self

import numpy as np

from deep_coral.core.matrix import Matrix, Vector
from deep_coral.diagnostics.errors import NonFiniteError, TrainConfigError
from deep_coral.net.network import Network, ParamGrads


@dataclass(slots=True, frozen=True, eq=False)
class Velocity:
    """Momentum buffers keyed by layer index."""

    weights: Mapping[int, Matrix]
    biases: Mapping[int, Vector]

    @classmethod
    def zeros(cls, net: Network) -> Self:
        weights: dict[int, Matrix] = {}
        biases: dict[int, Vector] = {}
        for i in net.param_indices:
            layer = net.layers[i]
            assert layer.weights is not None and layer.bias is not None
            weights[i] = np.zeros_like(layer.weights)
            biases[i] = np.zeros_like(layer.bias)
        return cls(weights=weights, biases=biases)


def check_sgd_hyperparameters(*, lr: float, momentum: float, weight_decay: float) -> None:
    if not lr > 0:
        raise TrainConfigError(f"lr must be positive, got {lr}")
    if not 0 <= momentum < 1:
        raise TrainConfigError(f"momentum must be in [0, 1), got {momentum}")
    if not weight_decay >= 0:
        raise TrainConfigError(f"weight_decay must be non-negative, got {weight_decay}")


def sgd_step(
    net: Network,
    grads: ParamGrads,
    *,
    lr: float,
    momentum: float,
    weight_decay: float,
    velocity: Velocity | None = None,
) -> tuple[Network, Velocity]:
    """Apply one update and return the new network and velocity."""

    check_sgd_hyperparameters(lr=lr, momentum=momentum, weight_decay=weight_decay)
    if velocity is None:
        velocity = Velocity.zeros(net)

    layers = list(net.layers)
    new_vw: dict[int, Matrix] = {}
    new_vb: dict[int, Vector] = {}
    for i in net.param_indices:
        layer = layers[i]
        assert layer.weights is not None and layer.bias is not None
        step = lr * layer.lr_multiplier

        vw = momentum * velocity.weights[i] - step * (
            grads.weights[i] + weight_decay * layer.weights
        )
        vb = momentum * velocity.biases[i] - step * grads.biases[i]
        weights = layer.weights + vw
        bias = layer.bias + vb

        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(bias))):
            raise NonFiniteError(f"non-finite parameter update in layer {i}")

        layers[i] = layer.with_params(weights, bias)
        new_vw[i] = vw
        new_vb[i] = vb

    return net.with_layers(layers), Velocity(weights=new_vw, biases=new_vb)


def scheduled_lr(base_lr: float, iteration: int, *, decay_every: int, gamma: float) -> float:
    """Step decay: `base_lr * gamma ** (iteration // decay_every)`; constant if 0."""

    if decay_every <= 0:
        return base_lr
    return base_lr * gamma ** (iteration // decay_every)


__all__ = ["Velocity", "check_sgd_hyperparameters", "scheduled_lr", "sgd_step"]
