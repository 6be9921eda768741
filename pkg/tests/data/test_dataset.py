import numpy as np
import pytest

from deep_coral.data.dataset import Dataset, Domain
from deep_coral.diagnostics.errors import (
    DimensionMismatchError,
    LabelOutOfRangeError,
    NonFiniteError,
)


def test_dataset_copies_and_freezes_inputs() -> None:
    features = np.ones((3, 2))
    ds = Dataset(features=features, labels=np.array([0, 1, 1]), domain=Domain.SOURCE, num_classes=2)

    features[0, 0] = 5.0
    assert ds.features[0, 0] == 1.0
    with pytest.raises(ValueError):
        ds.features[0, 0] = 2.0
    assert (ds.size, ds.dim, ds.has_labels) == (3, 2, True)


def test_without_labels_keeps_features() -> None:
    ds = Dataset(features=np.ones((2, 2)), labels=[0, 1], domain=Domain.TARGET, num_classes=2)
    bare = ds.without_labels()

    assert bare.labels is None
    assert np.array_equal(bare.features, ds.features)
    assert bare.domain is Domain.TARGET


def test_dataset_invariants() -> None:
    with pytest.raises(LabelOutOfRangeError):
        Dataset(features=np.ones((2, 2)), labels=[0, 2], domain=Domain.SOURCE, num_classes=2)
    with pytest.raises(DimensionMismatchError):
        Dataset(features=np.ones((2, 2)), labels=[0], domain=Domain.SOURCE, num_classes=2)
    with pytest.raises(NonFiniteError):
        Dataset(features=[[np.inf, 0.0]], labels=None, domain=Domain.SOURCE, num_classes=2)
