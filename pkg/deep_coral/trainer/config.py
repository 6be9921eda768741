"""Training hyperparameters."""

import math
from dataclasses import dataclass

from deep_coral.diagnostics.errors import LengthMismatchError, TrainConfigError
from deep_coral.net.optim import check_sgd_hyperparameters, scheduled_lr

DEFAULT_EVAL_EVERY = 50
LAMBDA_MIN = 1e-3
LAMBDA_MAX = 1e4


@dataclass(slots=True, frozen=True)
class TrainConfig:
    """All hyperparameters of one run.

    Defaults follow the published fine-tuning setup: batch 128 for both
    streams, base learning rate 1e-3, momentum 0.9, weight decay 5e-4.
    `lambdas` holds one weight per CORAL tap; a single value is broadcast.
    """

    lambdas: tuple[float, ...] = (1.0,)
    auto_lambda: bool = False
    batch_source: int = 128
    batch_target: int = 128
    lr: float = 1e-3
    momentum: float = 0.9
    weight_decay: float = 5e-4
    iterations: int = 1000
    eval_every: int = DEFAULT_EVAL_EVERY
    seed: int = 0
    lr_decay_every: int = 0
    lr_decay_gamma: float = 0.1
    probe_fraction: float = 0.1
    lambda_min: float = LAMBDA_MIN
    lambda_max: float = LAMBDA_MAX

    def __post_init__(self) -> None:
        if self.batch_source < 2 or self.batch_target < 2:
            raise TrainConfigError(
                f"batch sizes must be >= 2, got {self.batch_source}/{self.batch_target}"
            )
        if self.iterations < 1:
            raise TrainConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.eval_every < 1:
            raise TrainConfigError(f"eval_every must be >= 1, got {self.eval_every}")
        if not self.lambdas:
            raise TrainConfigError("at least one lambda is required")
        if any(not (math.isfinite(x) and x >= 0) for x in self.lambdas):
            raise TrainConfigError(f"lambdas must be finite and >= 0, got {self.lambdas}")
        check_sgd_hyperparameters(
            lr=self.lr, momentum=self.momentum, weight_decay=self.weight_decay
        )
        if self.lr_decay_every < 0 or not self.lr_decay_gamma > 0:
            raise TrainConfigError("lr_decay_every must be >= 0 and lr_decay_gamma > 0")
        if not 0 < self.probe_fraction <= 1:
            raise TrainConfigError(
                f"probe_fraction must be in (0, 1], got {self.probe_fraction}"
            )
        if not 0 < self.lambda_min <= self.lambda_max:
            raise TrainConfigError("need 0 < lambda_min <= lambda_max")

    def lambdas_for(self, num_taps: int) -> tuple[float, ...]:
        if len(self.lambdas) == num_taps:
            return self.lambdas
        if len(self.lambdas) == 1:
            return self.lambdas * num_taps
        raise LengthMismatchError(
            f"{len(self.lambdas)} lambdas given for {num_taps} CORAL taps"
        )

    def lr_at(self, iteration: int) -> float:
        return scheduled_lr(
            self.lr, iteration, decay_every=self.lr_decay_every, gamma=self.lr_decay_gamma
        )

    @property
    def probe_iterations(self) -> int:
        return max(1, math.ceil(self.probe_fraction * self.iterations))


__all__ = ["DEFAULT_EVAL_EVERY", "LAMBDA_MAX", "LAMBDA_MIN", "TrainConfig"]
