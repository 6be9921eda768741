"""Per-iteration metrics and the metrics CSV log."""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Final, Self

import numpy as np

from deep_coral.diagnostics.errors import DataIOError, MetricsError

JOINT_TOL: Final = 1e-9


@dataclass(slots=True, frozen=True)
class MetricsRecord:
    """One logged point.

    `target_acc` is None when the target set carries no labels.
    """

    iteration: int
    class_loss: float
    coral_losses: tuple[float, ...]
    joint_loss: float
    source_acc: float
    target_acc: float | None
    coral_distance: float

    def __post_init__(self) -> None:
        for name, acc in (("source_acc", self.source_acc), ("target_acc", self.target_acc)):
            if acc is not None and not 0.0 <= acc <= 1.0:
                raise MetricsError(
                    f"iteration {self.iteration}: {name} {acc!r} is outside [0, 1]"
                )

    def check_joint(self, lambdas: Sequence[float]) -> None:
        """Raise unless `joint_loss == class_loss + sum(lambda_i * coral_loss_i)`."""

        if len(lambdas) != len(self.coral_losses):
            raise MetricsError(
                f"iteration {self.iteration}: {len(lambdas)} lambdas for "
                f"{len(self.coral_losses)} CORAL losses"
            )
        expected = self.class_loss + math.fsum(
            lam * c for lam, c in zip(lambdas, self.coral_losses, strict=True)
        )
        if not math.isclose(self.joint_loss, expected, rel_tol=JOINT_TOL, abs_tol=JOINT_TOL):
            raise MetricsError(
                f"iteration {self.iteration}: joint_loss {self.joint_loss!r} != "
                f"class_loss + weighted CORAL {expected!r}"
            )


@dataclass(slots=True, frozen=True)
class LossWindow:
    """Mean per-step batch losses over the last `steps` steps of a run."""

    steps: int
    class_loss: float
    coral_losses: tuple[float, ...]
    joint_loss: float

    @classmethod
    def mean_of(cls, records: Sequence[MetricsRecord]) -> Self:
        if not records:
            raise MetricsError("cannot average an empty window of steps")
        widths = {len(r.coral_losses) for r in records}
        if len(widths) != 1:
            raise MetricsError(f"steps disagree on the number of CORAL losses: {sorted(widths)}")
        corals = np.array([r.coral_losses for r in records], dtype=np.float64)
        return cls(
            steps=len(records),
            class_loss=float(np.mean([r.class_loss for r in records])),
            coral_losses=tuple(float(v) for v in corals.mean(axis=0)),
            joint_loss=float(np.mean([r.joint_loss for r in records])),
        )


def metrics_header(num_taps: int) -> list[str]:
    return [
        "iteration",
        "class_loss",
        *(f"coral_loss_{i}" for i in range(num_taps)),
        "joint_loss",
        "source_acc",
        "target_acc",
        "coral_distance",
    ]


def _full(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def metrics_row(record: MetricsRecord) -> list[str]:
    return [
        str(record.iteration),
        _full(record.class_loss),
        *(_full(v) for v in record.coral_losses),
        _full(record.joint_loss),
        _full(record.source_acc),
        _full(record.target_acc),
        _full(record.coral_distance),
    ]


def format_metrics_csv(
    records: Sequence[MetricsRecord], *, num_taps: int, comments: Iterable[str] = ()
) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(metrics_header(num_taps)))
    lines.extend(",".join(metrics_row(r)) for r in records)
    return "\n".join(lines) + "\n"


def write_metrics_csv(
    records: Sequence[MetricsRecord],
    path: str | Path,
    *,
    num_taps: int,
    comments: Iterable[str] = (),
) -> None:
    p = Path(path)
    try:
        p.write_text(
            format_metrics_csv(records, num_taps=num_taps, comments=comments),
            encoding="utf-8",
            newline="\n",
        )
    except OSError as e:
        raise DataIOError(f"Cannot write output file: {e}", file=str(p)) from e


__all__ = [
    "JOINT_TOL",
    "LossWindow",
    "MetricsRecord",
    "format_metrics_csv",
    "metrics_header",
    "metrics_row",
    "write_metrics_csv",
]
