"""Dataset and matrix CSV files.

Format: numeric columns, optional trailing integer label column, no header,
newline-delimited UTF-8. Lines starting with `#` carry provenance and are
skipped on load. Floats are written with `repr` so save/load is bit-exact.
"""

import math
from collections.abc import Iterable
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike

from deep_coral.core.matrix import Matrix, as_matrix
from deep_coral.data.dataset import Dataset, Domain
from deep_coral.diagnostics.errors import (
    DataIOError,
    DataParseError,
    LabelOutOfRangeError,
)


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise DataIOError(f"Cannot read input file: {e}", file=str(path)) from e


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        raise DataIOError(f"Cannot write output file: {e}", file=str(path)) from e


def _data_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_no, [cell.strip() for cell in line.split(",")]


def _comment_lines(comments: Iterable[str]) -> list[str]:
    return [f"# {c}" for c in comments]


def _format_row(values: Iterable[float]) -> str:
    return ",".join(repr(float(v)) for v in values)


def parse_csv(
    text: str,
    *,
    has_labels: bool,
    num_classes: int,
    domain: Domain = Domain.SOURCE,
    filename: str | None = None,
) -> Dataset:
    """Parse dataset CSV text; row order is preserved."""

    rows: list[list[float]] = []
    labels: list[int] = []
    width: int | None = None

    for line_no, cells in _data_lines(text):
        if width is None:
            width = len(cells)
            if has_labels and width < 2:
                raise DataParseError(
                    "a labeled row needs at least one feature and a label",
                    file=filename,
                    line=line_no,
                )
        elif len(cells) != width:
            raise DataParseError(
                f"ragged row: expected {width} columns, found {len(cells)}",
                file=filename,
                line=line_no,
            )

        feature_cells = cells[:-1] if has_labels else cells
        try:
            values = [float(c) for c in feature_cells]
        except ValueError as e:
            raise DataParseError(f"invalid number: {e}", file=filename, line=line_no) from None
        if not all(math.isfinite(v) for v in values):
            raise DataParseError("non-finite feature value", file=filename, line=line_no)
        rows.append(values)

        if has_labels:
            try:
                label = int(cells[-1])
            except ValueError:
                raise DataParseError(
                    f"label {cells[-1]!r} is not an integer", file=filename, line=line_no
                ) from None
            if not 0 <= label < num_classes:
                raise LabelOutOfRangeError(
                    f"label {label} is outside [0, {num_classes})",
                    file=filename,
                    line=line_no,
                )
            labels.append(label)

    if not rows:
        raise DataParseError("no data rows", file=filename, line=1)

    return Dataset(
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64) if has_labels else None,
        domain=domain,
        num_classes=num_classes,
    )


def load_csv(
    path: str | Path,
    has_labels: bool,
    num_classes: int,
    *,
    domain: Domain = Domain.SOURCE,
) -> Dataset:
    """Load a dataset CSV file.

    Raises:
        DataIOError: the file cannot be read.
        DataParseError: malformed content; the error carries the line number.
        LabelOutOfRangeError: a label is not in [0, num_classes).
    """

    p = Path(path)
    return parse_csv(
        _read_text(p),
        has_labels=has_labels,
        num_classes=num_classes,
        domain=domain,
        filename=str(p),
    )


def format_csv(ds: Dataset, *, comments: Iterable[str] = ()) -> str:
    lines = _comment_lines(comments)
    if ds.labels is None:
        lines.extend(_format_row(row) for row in ds.features)
    else:
        lines.extend(
            f"{_format_row(row)},{int(label)}"
            for row, label in zip(ds.features, ds.labels, strict=True)
        )
    return "\n".join(lines) + "\n"


def save_csv(ds: Dataset, path: str | Path, *, comments: Iterable[str] = ()) -> None:
    _write_text(Path(path), format_csv(ds, comments=comments))


def save_matrix_csv(m: ArrayLike, path: str | Path) -> None:
    mat = as_matrix(m)
    _write_text(Path(path), "\n".join(_format_row(row) for row in mat) + "\n")


def load_matrix_csv(path: str | Path) -> Matrix:
    p = Path(path)
    ds = parse_csv(_read_text(p), has_labels=False, num_classes=1, filename=str(p))
    return ds.features


def count_columns(path: str | Path) -> int:
    """Number of columns in the first data row of a CSV file."""

    p = Path(path)
    for _, cells in _data_lines(_read_text(p)):
        return len(cells)
    raise DataParseError("no data rows", file=str(p), line=1)


__all__ = [
    "count_columns",
    "format_csv",
    "load_csv",
    "load_matrix_csv",
    "parse_csv",
    "save_csv",
    "save_matrix_csv",
]
