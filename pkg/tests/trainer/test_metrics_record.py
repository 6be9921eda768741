import math
from dataclasses import replace

import pytest

from deep_coral.data.shift import ShiftSpec, generate_shifted_pair
from deep_coral.diagnostics.errors import MetricsError
from deep_coral.net.network import init_network
from deep_coral.trainer.loop import snapshot_record
from deep_coral.trainer.metrics import LossWindow, MetricsRecord


def _record(**overrides: object) -> MetricsRecord:
    base = MetricsRecord(
        iteration=3,
        class_loss=0.4,
        coral_losses=(0.1, 0.3),
        joint_loss=0.4 + 2.0 * 0.1 + 0.5 * 0.3,
        source_acc=0.75,
        target_acc=None,
        coral_distance=0.1,
    )
    return replace(base, **overrides)  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "overrides",
    [
        {"source_acc": 1.5},
        {"source_acc": -0.25},
        {"source_acc": math.nan},
        {"target_acc": 1.0000001},
    ],
)
def test_accuracy_outside_unit_interval_is_rejected(overrides: dict[str, float]) -> None:
    with pytest.raises(MetricsError) as info:
        _record(**overrides)
    assert info.value.code == "TRN240"


def test_accuracy_bounds_and_missing_target_are_accepted() -> None:
    assert _record(source_acc=0.0, target_acc=1.0).target_acc == 1.0
    assert _record(target_acc=None).target_acc is None


def test_non_finite_losses_still_make_a_record() -> None:
    record = _record(class_loss=math.nan, joint_loss=math.inf)
    assert math.isnan(record.class_loss)


def test_joint_bookkeeping() -> None:
    _record().check_joint((2.0, 0.5))

    with pytest.raises(MetricsError, match="joint_loss"):
        _record().check_joint((2.0, 0.6))
    with pytest.raises(MetricsError, match="joint_loss"):
        _record(joint_loss=0.75 + 1e-6).check_joint((2.0, 0.5))
    with pytest.raises(MetricsError, match="2 CORAL losses"):
        _record().check_joint((2.0,))


def test_snapshot_refuses_an_inconsistent_row() -> None:
    spec = ShiftSpec(num_classes=2, dim=3, samples_per_class=10, seed=0, rotation_deg=20.0)
    source, target = generate_shifted_pair(spec)
    net = init_network([3, 4, 2], 0.1, 0)
    step = _record(coral_losses=(0.2,), joint_loss=0.4 + 0.2)

    row = snapshot_record(5, step, net, source, target, (1.0,))
    assert row.iteration == 5
    assert row.target_acc is not None

    with pytest.raises(MetricsError):
        snapshot_record(5, step, net, source, target, (3.0,))


def test_loss_window_mean() -> None:
    window = LossWindow.mean_of(
        [
            _record(class_loss=0.2, coral_losses=(0.1, 0.5), joint_loss=1.0),
            _record(class_loss=0.4, coral_losses=(0.3, 0.7), joint_loss=2.0),
        ]
    )

    assert window.steps == 2
    assert window.class_loss == pytest.approx(0.3)
    assert window.coral_losses == pytest.approx((0.2, 0.6))
    assert window.joint_loss == pytest.approx(1.5)


def test_loss_window_needs_uniform_steps() -> None:
    with pytest.raises(MetricsError):
        LossWindow.mean_of([])
    with pytest.raises(MetricsError):
        LossWindow.mean_of([_record(), _record(coral_losses=(0.1,))])
