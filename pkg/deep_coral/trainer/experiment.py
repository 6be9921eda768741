"""End-to-end experiment: build the network, pick lambdas, train, log."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from deep_coral.data.dataset import Dataset
from deep_coral.diagnostics.errors import DimensionMismatchError, TrainConfigError
from deep_coral.net.network import DEFAULT_HEAD_INIT_STD, Network, init_network
from deep_coral.trainer.calibrate import calibrate_lambda
from deep_coral.trainer.config import TrainConfig
from deep_coral.trainer.loop import train_loop
from deep_coral.trainer.metrics import LossWindow, MetricsRecord

DEFAULT_HIDDEN_DIMS: tuple[int, ...] = (32,)


@dataclass(slots=True, frozen=True, eq=False)
class ExperimentResult:
    records: tuple[MetricsRecord, ...]
    network: Network
    lambdas: tuple[float, ...]
    tail: LossWindow

    @property
    def final(self) -> MetricsRecord:
        return self.records[-1]


def _check_datasets(source: Dataset, target: Dataset) -> None:
    if source.labels is None:
        raise TrainConfigError("the source dataset must be labeled")
    if source.dim != target.dim:
        raise DimensionMismatchError(
            f"source has {source.dim} features, target has {target.dim}"
        )
    if source.num_classes != target.num_classes:
        raise DimensionMismatchError(
            f"source has {source.num_classes} classes, target has {target.num_classes}"
        )


def build_network(
    source: Dataset,
    *,
    seed: int,
    hidden_dims: Sequence[int] = DEFAULT_HIDDEN_DIMS,
    coral_taps: Iterable[int] | None = None,
    head_init_std: float = DEFAULT_HEAD_INIT_STD,
) -> Network:
    dims = [source.dim, *hidden_dims, source.num_classes]
    return init_network(dims, head_init_std, seed, coral_taps=coral_taps)


def run_experiment(
    config: TrainConfig,
    source: Dataset,
    target: Dataset,
    *,
    hidden_dims: Sequence[int] = DEFAULT_HIDDEN_DIMS,
    coral_taps: Iterable[int] | None = None,
    head_init_std: float = DEFAULT_HEAD_INIT_STD,
    source_only: bool = False,
    network: Network | None = None,
) -> ExperimentResult:
    """Train on labeled source data and unlabeled target data.

    Target labels, when present, only score `target_acc`. With
    `source_only=True` the target stream never enters an update (the
    no-adaptation baseline); CORAL losses and distance are still logged.
    """

    _check_datasets(source, target)
    net = network or build_network(
        source,
        seed=config.seed,
        hidden_dims=hidden_dims,
        coral_taps=coral_taps,
        head_init_std=head_init_std,
    )
    if net.input_dim != source.dim or net.num_classes != source.num_classes:
        raise DimensionMismatchError(
            f"network maps {net.input_dim} -> {net.num_classes}, data has "
            f"{source.dim} features and {source.num_classes} classes"
        )

    num_taps = len(net.coral_taps)
    if source_only:
        lambdas = (0.0,) * num_taps
    elif config.auto_lambda:
        lambdas = calibrate_lambda(net, source, target, config)
    else:
        lambdas = config.lambdas_for(num_taps)

    result = train_loop(net, source, target, config, lambdas, source_only=source_only)
    return ExperimentResult(
        records=result.records,
        network=result.network,
        lambdas=lambdas,
        tail=result.tail,
    )


__all__ = ["DEFAULT_HIDDEN_DIMS", "ExperimentResult", "build_network", "run_experiment"]
