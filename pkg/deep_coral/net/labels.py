"""Integer class labels."""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from deep_coral.diagnostics.errors import BadLabelError

type LabelBatch = NDArray[np.int64]


def as_labels(values: ArrayLike, *, num_classes: int) -> LabelBatch:
    """Return `values` as a 1-D int64 label array with entries in [0, num_classes)."""

    arr = np.asarray(values)
    if arr.ndim != 1:
        raise BadLabelError(f"labels must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise BadLabelError(f"labels must be integers, got dtype {arr.dtype}")
    labels = arr.astype(np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        bad = int(labels[(labels < 0) | (labels >= num_classes)][0])
        raise BadLabelError(f"label {bad} is outside [0, {num_classes})")
    return labels


__all__ = ["LabelBatch", "as_labels"]
