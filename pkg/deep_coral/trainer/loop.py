"""Training loop shared by experiments and the lambda probe."""

import logging
import math
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Final

import numpy as np

from deep_coral.core.loss import coral_distance
from deep_coral.data.batching import batch_iterator
from deep_coral.data.dataset import Dataset
from deep_coral.diagnostics.errors import DivergedError, NonFiniteError
from deep_coral.net.loss import predict
from deep_coral.net.network import Network, forward
from deep_coral.net.optim import Velocity
from deep_coral.trainer.config import TrainConfig
from deep_coral.trainer.metrics import LossWindow, MetricsRecord
from deep_coral.trainer.step import (
    StepResult,
    monitor_coral_losses,
    supervised_step,
    train_step,
)

logger = logging.getLogger(__name__)

# SeedSequence children: 0 = source batches, 1 = target batches.
_SOURCE_STREAM: Final = 0
_TARGET_STREAM: Final = 1


@dataclass(slots=True, frozen=True, eq=False)
class LoopResult:
    """`tail` averages the step losses over the last `eval_every` steps."""

    network: Network
    records: tuple[MetricsRecord, ...]
    last_step: MetricsRecord
    tail: LossWindow


def _accuracy(logits: np.ndarray, labels: np.ndarray | None) -> float | None:
    if labels is None:
        return None
    return float(np.mean(predict(logits) == labels))


def snapshot_record(
    iteration: int,
    step: MetricsRecord,
    net: Network,
    source: Dataset,
    target: Dataset,
    lambdas: Sequence[float],
) -> MetricsRecord:
    """Combine a step's batch losses with full-dataset accuracies and distance.

    Target labels are read here and nowhere else. The row's joint loss is
    checked against `lambdas` before it is returned.
    """

    source_pass = forward(net, source.features)
    target_pass = forward(net, target.features)
    tap = net.coral_taps[0] if net.coral_taps else None
    distance = (
        coral_distance(source_pass.taps[tap], target_pass.taps[tap])
        if tap is not None
        else math.nan
    )
    source_acc = _accuracy(source_pass.logits, source.labels)
    row = replace(
        step,
        iteration=iteration,
        source_acc=0.0 if source_acc is None else source_acc,
        target_acc=_accuracy(target_pass.logits, target.labels),
        coral_distance=distance,
    )
    row.check_joint(lambdas)
    return row


def _check_finite(record: MetricsRecord, iteration: int) -> None:
    values = (record.class_loss, *record.coral_losses, record.joint_loss)
    if not all(math.isfinite(v) for v in values):
        raise DivergedError(f"non-finite loss at iteration {iteration}")


def train_loop(
    net: Network,
    source: Dataset,
    target: Dataset,
    config: TrainConfig,
    lambdas: tuple[float, ...],
    *,
    source_only: bool = False,
) -> LoopResult:
    """Run `config.iterations` steps and log at the configured cadence.

    A row is logged after step 1, every `eval_every` steps and after the last
    step. Each row holds the step's batch losses and the accuracies/distance
    of the network after that step. Source-only rows weight every tap by 0.
    """

    streams = np.random.SeedSequence(config.seed).spawn(2)
    source_batches = batch_iterator(source, config.batch_source, streams[_SOURCE_STREAM])
    target_batches = batch_iterator(
        target.without_labels(), config.batch_target, streams[_TARGET_STREAM]
    )

    velocity = Velocity.zeros(net)
    records: list[MetricsRecord] = []
    window: deque[MetricsRecord] = deque(maxlen=config.eval_every)
    weights = (0.0,) * len(net.coral_taps) if source_only else lambdas
    last: MetricsRecord | None = None

    for k in range(1, config.iterations + 1):
        sb = next(source_batches)
        tb = next(target_batches)
        log_point = k == 1 or k % config.eval_every == 0 or k == config.iterations

        try:
            result: StepResult
            if source_only:
                monitored = (
                    monitor_coral_losses(net, sb.features, tb.features) if log_point else ()
                )
                result = supervised_step(
                    net, velocity, sb.features, sb.labels, config, iteration=k - 1
                )
                window.append(result.record)
                result = replace(
                    result,
                    record=replace(
                        result.record,
                        coral_losses=monitored,
                        coral_distance=monitored[0] if monitored else math.nan,
                    ),
                )
            else:
                result = train_step(
                    net,
                    velocity,
                    sb.features,
                    sb.labels,
                    tb.features,
                    config,
                    lambdas=lambdas,
                    iteration=k - 1,
                )
                window.append(result.record)
            _check_finite(result.record, k)
            net, velocity, last = result.network, result.velocity, result.record

            if log_point:
                row = snapshot_record(k, last, net, source, target, weights)
                records.append(row)
                logger.info(
                    "iteration %d: class_loss=%.6g coral=%s source_acc=%.4f "
                    "target_acc=%s coral_distance=%.6g",
                    k,
                    row.class_loss,
                    ", ".join(f"{v:.6g}" for v in row.coral_losses),
                    row.source_acc,
                    "n/a" if row.target_acc is None else f"{row.target_acc:.4f}",
                    row.coral_distance,
                )
        except NonFiniteError as e:
            raise DivergedError(f"training diverged at iteration {k}: {e.message}") from e

    assert last is not None
    return LoopResult(
        network=net,
        records=tuple(records),
        last_step=last,
        tail=LossWindow.mean_of(window),
    )


__all__ = ["LoopResult", "snapshot_record", "train_loop"]
