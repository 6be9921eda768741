"""Dual-stream training of the joint classification + CORAL objective."""

from deep_coral.trainer.calibrate import calibrate_lambda, lambda_from_probe
from deep_coral.trainer.config import TrainConfig
from deep_coral.trainer.experiment import ExperimentResult, build_network, run_experiment
from deep_coral.trainer.loop import LoopResult, train_loop
from deep_coral.trainer.metrics import LossWindow, MetricsRecord, write_metrics_csv
from deep_coral.trainer.step import (
    StepResult,
    evaluate,
    joint_gradients,
    joint_loss,
    supervised_step,
    train_step,
)

__all__ = [
    "ExperimentResult",
    "LoopResult",
    "LossWindow",
    "MetricsRecord",
    "StepResult",
    "TrainConfig",
    "build_network",
    "calibrate_lambda",
    "evaluate",
    "joint_gradients",
    "joint_loss",
    "lambda_from_probe",
    "run_experiment",
    "supervised_step",
    "train_loop",
    "train_step",
    "write_metrics_csv",
]
