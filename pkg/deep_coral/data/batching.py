"""Deterministic mini-batch streams.

Each epoch is a seeded permutation of the row indices. Batches are cut from
the concatenated stream of permutations, so a short final batch is completed
with the head of the next epoch's permutation and every batch has exactly
`batch` rows.
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from deep_coral.core.matrix import Matrix
from deep_coral.data.dataset import Dataset
from deep_coral.diagnostics.errors import (
    BadSpecError,
    BatchTooLargeError,
    BatchTooSmallError,
)
from deep_coral.net.labels import LabelBatch

type Seed = int | np.random.SeedSequence


@dataclass(slots=True, frozen=True, eq=False)
class Batch:
    indices: NDArray[np.intp]
    features: Matrix
    labels: LabelBatch | None


class BatchIterator(Iterator[Batch]):
    """Private-cursor batch stream over one dataset.

    `epochs=None` streams forever; otherwise it yields
    `ceil(epochs * n / batch)` batches.
    """

    def __init__(self, ds: Dataset, batch: int, seed: Seed, epochs: int | None = None) -> None:
        if batch < 2:
            raise BatchTooSmallError(f"batch must be >= 2, got {batch}")
        if batch > ds.size:
            raise BatchTooLargeError(f"batch {batch} exceeds dataset size {ds.size}")
        if epochs is not None and epochs < 1:
            raise BadSpecError(f"epochs must be >= 1, got {epochs}")

        self._ds = ds
        self._batch = batch
        self._rng = np.random.default_rng(seed)
        self._perm = self._rng.permutation(ds.size)
        self._pos = 0
        self.epoch = 0
        self._remaining = None if epochs is None else math.ceil(epochs * ds.size / batch)

    def __iter__(self) -> "BatchIterator":
        return self

    def __next__(self) -> Batch:
        if self._remaining is not None:
            if self._remaining == 0:
                raise StopIteration
            self._remaining -= 1

        chunks: list[NDArray[np.intp]] = []
        need = self._batch
        while need:
            if self._pos == self._ds.size:
                self._perm = self._rng.permutation(self._ds.size)
                self._pos = 0
                self.epoch += 1
            chunk = self._perm[self._pos : self._pos + need]
            chunks.append(chunk)
            self._pos += chunk.size
            need -= chunk.size

        idx = np.concatenate(chunks)
        labels = None if self._ds.labels is None else self._ds.labels[idx]
        return Batch(indices=idx, features=self._ds.features[idx], labels=labels)


def batch_iterator(
    ds: Dataset, batch: int, seed: Seed, epochs: int | None = None
) -> BatchIterator:
    return BatchIterator(ds, batch, seed, epochs)


__all__ = ["Batch", "BatchIterator", "Seed", "batch_iterator"]
