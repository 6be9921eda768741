"""Deep CORAL: unsupervised domain adaptation by aligning feature covariances.

The stable public API is re-exported here; everything else lives in the
subpackages.
"""

from deep_coral.__about__ import __version__
from deep_coral.core import (
    coral_distance,
    coral_grad,
    coral_loss,
    covariance,
    feature_spread,
    frobenius_sq,
)
from deep_coral.data import (
    Dataset,
    ShiftSpec,
    batch_iterator,
    generate_shifted_pair,
    load_csv,
    save_csv,
    standard_shift_spec,
)
from deep_coral.net import (
    Network,
    backward,
    class_loss_and_grad,
    forward,
    init_network,
    sgd_step,
)
from deep_coral.trainer import (
    MetricsRecord,
    TrainConfig,
    calibrate_lambda,
    evaluate,
    joint_loss,
    run_experiment,
    train_step,
)

__all__ = [
    "Dataset",
    "MetricsRecord",
    "Network",
    "ShiftSpec",
    "TrainConfig",
    "__version__",
    "backward",
    "batch_iterator",
    "calibrate_lambda",
    "class_loss_and_grad",
    "coral_distance",
    "coral_grad",
    "coral_loss",
    "covariance",
    "evaluate",
    "feature_spread",
    "forward",
    "frobenius_sq",
    "generate_shifted_pair",
    "init_network",
    "joint_loss",
    "load_csv",
    "run_experiment",
    "save_csv",
    "sgd_step",
    "standard_shift_spec",
    "train_step",
]
