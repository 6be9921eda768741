import pytest

from deep_coral.diagnostics.errors import LengthMismatchError, TrainConfigError
from deep_coral.trainer.config import LAMBDA_MAX, LAMBDA_MIN, TrainConfig


def test_defaults_follow_the_fine_tuning_setup() -> None:
    cfg = TrainConfig()

    assert (cfg.batch_source, cfg.batch_target) == (128, 128)
    assert cfg.lr == 1e-3
    assert cfg.momentum == 0.9
    assert cfg.weight_decay == 5e-4
    assert (cfg.lambda_min, cfg.lambda_max) == (LAMBDA_MIN, LAMBDA_MAX)


def test_single_lambda_is_broadcast() -> None:
    assert TrainConfig(lambdas=(2.0,)).lambdas_for(3) == (2.0, 2.0, 2.0)
    assert TrainConfig(lambdas=(1.0, 0.5)).lambdas_for(2) == (1.0, 0.5)
    with pytest.raises(LengthMismatchError):
        TrainConfig(lambdas=(1.0, 0.5)).lambdas_for(3)


def test_step_decay_schedule() -> None:
    cfg = TrainConfig(lr=0.1, lr_decay_every=10, lr_decay_gamma=0.5)

    assert cfg.lr_at(0) == 0.1
    assert cfg.lr_at(9) == 0.1
    assert cfg.lr_at(10) == pytest.approx(0.05)
    assert cfg.lr_at(25) == pytest.approx(0.025)
    assert TrainConfig(lr=0.1).lr_at(10_000) == 0.1


def test_probe_iterations() -> None:
    assert TrainConfig(iterations=1000).probe_iterations == 100
    assert TrainConfig(iterations=5).probe_iterations == 1
    assert TrainConfig(iterations=10, probe_fraction=1.0).probe_iterations == 10


@pytest.mark.parametrize(
    "kwargs",
    [
        {"iterations": 0},
        {"eval_every": 0},
        {"batch_source": 1},
        {"batch_target": 1},
        {"lambdas": ()},
        {"lambdas": (-1.0,)},
        {"lambdas": (float("nan"),)},
        {"lr": 0.0},
        {"momentum": 1.0},
        {"weight_decay": -1e-4},
        {"lr_decay_gamma": 0.0},
        {"probe_fraction": 0.0},
        {"lambda_min": 10.0, "lambda_max": 1.0},
    ],
)
def test_invalid_configs(kwargs: dict[str, object]) -> None:
    with pytest.raises(TrainConfigError):
        TrainConfig(**kwargs)  # type: ignore[arg-type]


def test_zero_lambda_is_allowed() -> None:
    assert TrainConfig(lambdas=(0.0,)).lambdas == (0.0,)
