"""Datasets: synthetic domain shift, CSV files and deterministic batching."""

from deep_coral.data.batching import Batch, BatchIterator, batch_iterator
from deep_coral.data.csvio import load_csv, load_matrix_csv, save_csv, save_matrix_csv
from deep_coral.data.dataset import Dataset, Domain
from deep_coral.data.shift import (
    MeanLayout,
    ShiftSpec,
    generate_shifted_pair,
    standard_shift_spec,
)

__all__ = [
    "Batch",
    "BatchIterator",
    "Dataset",
    "Domain",
    "MeanLayout",
    "ShiftSpec",
    "batch_iterator",
    "generate_shifted_pair",
    "load_csv",
    "load_matrix_csv",
    "save_csv",
    "save_matrix_csv",
    "standard_shift_spec",
]
