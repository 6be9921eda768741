"""In-memory datasets."""

from dataclasses import dataclass, replace
from enum import StrEnum
from typing import Self

from deep_coral.core.matrix import Matrix, as_matrix, frozen
from deep_coral.diagnostics.errors import (
    BadLabelError,
    DimensionMismatchError,
    LabelOutOfRangeError,
)
from deep_coral.net.labels import LabelBatch, as_labels


class Domain(StrEnum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(slots=True, frozen=True, eq=False)
class Dataset:
    """Feature rows with optional labels.

    Target datasets may carry labels; training never reads them, they only
    score target accuracy.
    """

    features: Matrix
    labels: LabelBatch | None
    domain: Domain
    num_classes: int

    def __post_init__(self) -> None:
        if self.num_classes < 1:
            raise LabelOutOfRangeError(f"num_classes must be >= 1, got {self.num_classes}")
        features = frozen(as_matrix(self.features, name="features").copy())
        object.__setattr__(self, "features", features)
        if self.labels is not None:
            try:
                labels = as_labels(self.labels, num_classes=self.num_classes)
            except BadLabelError as e:
                raise LabelOutOfRangeError(e.message) from None
            if labels.shape[0] != features.shape[0]:
                raise DimensionMismatchError(
                    f"{labels.shape[0]} labels for {features.shape[0]} feature rows"
                )
            object.__setattr__(self, "labels", frozen(labels.copy()))

    @property
    def size(self) -> int:
        return int(self.features.shape[0])

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    def without_labels(self) -> Self:
        return replace(self, labels=None)


__all__ = ["Dataset", "Domain"]
