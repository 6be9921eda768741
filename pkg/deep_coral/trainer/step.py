"""One dual-stream optimisation step of the joint objective

    loss = class_loss + sum_i lambda_i * coral_loss_i

Source and target batches pass through the same parameters; the
classification loss sees the source stream only and each CORAL tap compares
the two streams' activations at that layer.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from deep_coral.core.loss import coral_loss, coral_loss_and_grad
from deep_coral.core.matrix import Matrix, as_matrix
from deep_coral.diagnostics.errors import (
    DegenerateBatchError,
    DimensionMismatchError,
    LengthMismatchError,
    StaleForwardError,
)
from deep_coral.net.loss import class_loss_and_grad, predict
from deep_coral.net.network import ForwardPass, Network, ParamGrads, backward, forward
from deep_coral.net.optim import Velocity, sgd_step
from deep_coral.trainer.config import TrainConfig
from deep_coral.trainer.metrics import MetricsRecord

logger = logging.getLogger(__name__)


def joint_loss(
    class_loss: float, coral_losses: Sequence[float], lambdas: Sequence[float]
) -> float:
    """`class_loss + sum(lambda_i * coral_loss_i)`."""

    if len(coral_losses) != len(lambdas):
        raise LengthMismatchError(
            f"{len(coral_losses)} CORAL losses but {len(lambdas)} lambdas"
        )
    total = class_loss
    for lam, value in zip(lambdas, coral_losses, strict=True):
        total += lam * value
    return total


@dataclass(slots=True, frozen=True, eq=False)
class JointEvaluation:
    class_loss: float
    coral_losses: tuple[float, ...]
    grads: ParamGrads
    source_pass: ForwardPass
    target_pass: ForwardPass


def _check_batch(x: ArrayLike, *, name: str) -> Matrix:
    m = as_matrix(x, name=name)
    if m.shape[0] < 2:
        raise DegenerateBatchError(f"{name} has {m.shape[0]} row(s); CORAL needs >= 2")
    return m


def joint_gradients(
    net: Network,
    source_x: ArrayLike,
    source_y: ArrayLike,
    target_x: ArrayLike,
    lambdas: Sequence[float],
) -> JointEvaluation:
    """Loss terms and parameter gradients of the joint objective.

    Taps with lambda == 0 are monitored but contribute no gradient, and the
    target stream is not backpropagated at all when every lambda is zero.
    """

    xs = _check_batch(source_x, name="source batch")
    xt = _check_batch(target_x, name="target batch")
    if len(lambdas) != len(net.coral_taps):
        raise LengthMismatchError(
            f"{len(lambdas)} lambdas for {len(net.coral_taps)} CORAL taps"
        )

    params = net.fingerprint()
    source_pass = forward(net, xs)
    target_pass = forward(net, xt)
    if not (source_pass.fingerprint == target_pass.fingerprint == params):
        raise StaleForwardError("source and target streams saw different parameters")

    class_loss, grad_logits = class_loss_and_grad(source_pass.logits, source_y)

    coral_losses: list[float] = []
    source_taps: dict[int, Matrix] = {}
    target_taps: dict[int, Matrix] = {}
    for tap, lam in zip(net.coral_taps, lambdas, strict=True):
        d_s, d_t = source_pass.taps[tap], target_pass.taps[tap]
        if lam == 0:
            coral_losses.append(coral_loss(d_s, d_t))
            continue
        value, grad = coral_loss_and_grad(d_s, d_t)
        coral_losses.append(value)
        source_taps[tap] = lam * grad.grad_source
        target_taps[tap] = lam * grad.grad_target

    grads = backward(net, source_pass, grad_logits, source_taps)
    if target_taps:
        grads = grads + backward(net, target_pass, None, target_taps)

    return JointEvaluation(
        class_loss=class_loss,
        coral_losses=tuple(coral_losses),
        grads=grads,
        source_pass=source_pass,
        target_pass=target_pass,
    )


@dataclass(slots=True, frozen=True, eq=False)
class StepResult:
    network: Network
    velocity: Velocity
    record: MetricsRecord


def _batch_accuracy(logits: Matrix, labels: ArrayLike) -> float:
    return float(np.mean(predict(logits) == np.asarray(labels)))


def train_step(
    net: Network,
    velocity: Velocity | None,
    source_x: ArrayLike,
    source_y: ArrayLike,
    target_x: ArrayLike,
    config: TrainConfig,
    *,
    lambdas: Sequence[float] | None = None,
    iteration: int = 0,
) -> StepResult:
    """Forward both streams, take one SGD step on the summed gradients.

    The returned record describes the batch before the update; its
    `coral_distance` is the first tap's batch CORAL loss and `target_acc` is
    None (target labels are never read here).
    """

    lams = tuple(lambdas) if lambdas is not None else config.lambdas_for(len(net.coral_taps))
    ev = joint_gradients(net, source_x, source_y, target_x, lams)

    joint = joint_loss(ev.class_loss, ev.coral_losses, lams)
    record = MetricsRecord(
        iteration=iteration,
        class_loss=ev.class_loss,
        coral_losses=ev.coral_losses,
        joint_loss=joint,
        source_acc=_batch_accuracy(ev.source_pass.logits, source_y),
        target_acc=None,
        coral_distance=ev.coral_losses[0] if ev.coral_losses else 0.0,
    )
    logger.debug(
        "step %d class=%.6g coral=%s joint=%.6g",
        iteration,
        ev.class_loss,
        ev.coral_losses,
        joint,
    )

    new_net, new_velocity = sgd_step(
        net,
        ev.grads,
        lr=config.lr_at(iteration),
        momentum=config.momentum,
        weight_decay=config.weight_decay,
        velocity=velocity,
    )
    return StepResult(network=new_net, velocity=new_velocity, record=record)


def supervised_step(
    net: Network,
    velocity: Velocity | None,
    source_x: ArrayLike,
    source_y: ArrayLike,
    config: TrainConfig,
    *,
    iteration: int = 0,
) -> StepResult:
    """Source-only step: classification loss alone, no target stream."""

    xs = as_matrix(source_x, name="source batch")
    source_pass = forward(net, xs)
    class_loss, grad_logits = class_loss_and_grad(source_pass.logits, source_y)
    grads = backward(net, source_pass, grad_logits, {})

    record = MetricsRecord(
        iteration=iteration,
        class_loss=class_loss,
        coral_losses=(),
        joint_loss=class_loss,
        source_acc=_batch_accuracy(source_pass.logits, source_y),
        target_acc=None,
        coral_distance=math.nan,
    )
    new_net, new_velocity = sgd_step(
        net,
        grads,
        lr=config.lr_at(iteration),
        momentum=config.momentum,
        weight_decay=config.weight_decay,
        velocity=velocity,
    )
    return StepResult(network=new_net, velocity=new_velocity, record=record)


def monitor_coral_losses(
    net: Network, source_x: ArrayLike, target_x: ArrayLike
) -> tuple[float, ...]:
    """CORAL loss at every tap, read-only."""

    source_pass = forward(net, source_x)
    target_pass = forward(net, target_x)
    return tuple(
        coral_loss(source_pass.taps[tap], target_pass.taps[tap]) for tap in net.coral_taps
    )


def evaluate(net: Network, features: ArrayLike, labels: ArrayLike) -> float:
    """Fraction of rows whose argmax logit equals the label.

    Ties go to the lowest class index.
    """

    x = as_matrix(features, name="features")
    y = np.asarray(labels)
    if y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise DimensionMismatchError(f"{y.size} labels for {x.shape[0]} feature rows")
    return _batch_accuracy(forward(net, x).logits, y)


__all__ = [
    "JointEvaluation",
    "StepResult",
    "evaluate",
    "joint_gradients",
    "joint_loss",
    "monitor_coral_losses",
    "supervised_step",
    "train_step",
]
