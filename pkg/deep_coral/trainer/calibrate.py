"""Lambda calibration.

The CORAL weight is chosen so that the classification loss and the weighted
CORAL loss end up roughly equal. This module turns that criterion into a
procedure: run a short probe with the configured lambdas, then set

    lambda_i = class_loss / coral_loss_i

using the probe's losses averaged over its last `eval_every` steps, clamped to
[lambda_min, lambda_max]. It is one deterministic reading of "roughly the
same", not a tuned search.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import replace

from deep_coral.data.dataset import Dataset
from deep_coral.diagnostics.errors import (
    DivergedError,
    ProbeDivergedError,
    TrainConfigError,
)
from deep_coral.net.network import Network
from deep_coral.trainer.config import LAMBDA_MAX, LAMBDA_MIN, TrainConfig
from deep_coral.trainer.loop import train_loop

logger = logging.getLogger(__name__)


def lambda_from_probe(
    class_loss: float,
    coral_losses: Sequence[float],
    *,
    lambda_min: float = LAMBDA_MIN,
    lambda_max: float = LAMBDA_MAX,
) -> tuple[float, ...]:
    """Ratio rule with clamping. A zero CORAL loss maps to `lambda_max`."""

    if not all(math.isfinite(v) for v in (class_loss, *coral_losses)):
        raise ProbeDivergedError(
            f"probe losses are non-finite: class={class_loss} coral={list(coral_losses)}"
        )
    out: list[float] = []
    for coral in coral_losses:
        ratio = class_loss / coral if coral > 0 else lambda_max
        out.append(min(max(ratio, lambda_min), lambda_max))
    return tuple(out)


def calibrate_lambda(
    net: Network, source: Dataset, target: Dataset, config: TrainConfig
) -> tuple[float, ...]:
    """Probe-train `net` for `config.probe_iterations` steps and derive lambdas.

    The probe uses the configured lambdas and the run's seed; `net` itself is
    not modified.
    """

    if not config.auto_lambda:
        raise TrainConfigError("calibrate_lambda requires auto_lambda=true")

    probe = replace(config, iterations=config.probe_iterations, auto_lambda=False)
    try:
        result = train_loop(
            net, source, target, probe, config.lambdas_for(len(net.coral_taps))
        )
    except DivergedError as e:
        raise ProbeDivergedError(f"lambda probe diverged: {e.message}") from e

    tail = result.tail
    lambdas = lambda_from_probe(
        tail.class_loss,
        tail.coral_losses,
        lambda_min=config.lambda_min,
        lambda_max=config.lambda_max,
    )
    logger.info(
        "calibrated lambdas %s after %d probe steps (mean of last %d: class_loss=%.6g, coral=%s)",
        lambdas,
        probe.iterations,
        tail.steps,
        tail.class_loss,
        tail.coral_losses,
    )
    return lambdas


__all__ = ["calibrate_lambda", "lambda_from_probe"]
