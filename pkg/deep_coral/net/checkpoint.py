"""Versioned text checkpoints.

Layout::

    # deep-coral checkpoint
    format=deep-coral-checkpoint
    version=1
    <provenance key=value lines>
    taps=2
    layer=0 kind=affine lr_multiplier=1.0 rows=4 cols=8
    <rows lines of comma-separated weights>
    <one line of comma-separated bias>
    layer=1 kind=relu
    ...

Floats are written with `repr`, the shortest string that parses back to the
same double, so a save/load round trip is bit-exact and repeated saves are
byte-identical.
"""

from collections.abc import Mapping
from pathlib import Path

import numpy as np

from deep_coral.diagnostics.errors import DataIOError, DataParseError
from deep_coral.net.layers import Layer, LayerKind
from deep_coral.net.network import Network

CHECKPOINT_FORMAT = "deep-coral-checkpoint"
CHECKPOINT_VERSION = 1

_RESERVED = {"format", "version", "taps"}


def _floats(values: np.ndarray) -> str:
    return ",".join(repr(float(v)) for v in values)


def format_checkpoint(net: Network, *, provenance: Mapping[str, str] | None = None) -> str:
    lines = [
        "# deep-coral checkpoint",
        f"format={CHECKPOINT_FORMAT}",
        f"version={CHECKPOINT_VERSION}",
    ]
    for key, value in (provenance or {}).items():
        if key in _RESERVED or "=" in key or "\n" in value:
            raise ValueError(f"invalid provenance entry {key!r}")
        lines.append(f"{key}={value}")
    lines.append("taps=" + ",".join(str(t) for t in net.coral_taps))

    for idx, layer in enumerate(net.layers):
        if layer.kind is LayerKind.AFFINE:
            assert layer.weights is not None and layer.bias is not None
            rows, cols = layer.weights.shape
            lines.append(
                f"layer={idx} kind={layer.kind.value} "
                f"lr_multiplier={layer.lr_multiplier!r} rows={rows} cols={cols}"
            )
            lines.extend(_floats(row) for row in layer.weights)
            lines.append(_floats(layer.bias))
        else:
            lines.append(f"layer={idx} kind={layer.kind.value}")
    return "\n".join(lines) + "\n"


def save_checkpoint(
    net: Network, path: str | Path, *, provenance: Mapping[str, str] | None = None
) -> None:
    p = Path(path)
    try:
        p.write_text(
            format_checkpoint(net, provenance=provenance), encoding="utf-8", newline="\n"
        )
    except OSError as e:
        raise DataIOError(f"Cannot write checkpoint: {e}", file=str(p)) from e


class _Lines:
    def __init__(self, text: str, *, filename: str | None) -> None:
        self._lines = text.splitlines()
        self._pos = 0
        self.filename = filename

    @property
    def line_no(self) -> int:
        return self._pos

    def at_end(self) -> bool:
        return self._pos >= len(self._lines)

    def next(self) -> str:
        if self.at_end():
            raise self.error("unexpected end of checkpoint")
        line = self._lines[self._pos]
        self._pos += 1
        return line

    def error(self, message: str) -> DataParseError:
        return DataParseError(message, file=self.filename, line=max(self._pos, 1))


def _parse_fields(text: str, lines: _Lines) -> dict[str, str]:
    out: dict[str, str] = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise lines.error(f"expected key=value, found {token!r}")
        out[key] = value
    return out


def _parse_row(text: str, width: int, lines: _Lines) -> list[float]:
    parts = text.split(",")
    if len(parts) != width:
        raise lines.error(f"expected {width} values, found {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as e:
        raise lines.error(f"invalid number: {e}") from None


def parse_checkpoint(text: str, *, filename: str | None = None) -> tuple[Network, dict[str, str]]:
    """Parse checkpoint text into a network and its provenance entries."""

    lines = _Lines(text, filename=filename)
    header: dict[str, str] = {}
    layers: list[Layer] = []

    while not lines.at_end():
        line = lines.next()
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("layer="):
            layers.append(_parse_layer(line, lines))
            continue
        if layers:
            raise lines.error("header entries must precede layer blocks")
        key, sep, value = line.partition("=")
        if not sep:
            raise lines.error(f"expected key=value, found {line!r}")
        header[key.strip()] = value.strip()

    if header.get("format") != CHECKPOINT_FORMAT:
        raise DataParseError("not a deep-coral checkpoint", file=filename, line=1)
    if header.get("version") != str(CHECKPOINT_VERSION):
        raise DataParseError(
            f"unsupported checkpoint version {header.get('version')!r}", file=filename, line=1
        )

    taps_text = header.get("taps", "")
    try:
        taps = tuple(int(t) for t in taps_text.split(",") if t)
    except ValueError:
        raise DataParseError(f"invalid taps {taps_text!r}", file=filename) from None

    net = Network(layers=tuple(layers), coral_taps=taps)
    provenance = {k: v for k, v in header.items() if k not in _RESERVED}
    return net, provenance


def _parse_layer(line: str, lines: _Lines) -> Layer:
    fields = _parse_fields(line, lines)
    try:
        kind = LayerKind(fields.get("kind", ""))
    except ValueError:
        raise lines.error(f"unknown layer kind {fields.get('kind')!r}") from None

    if kind is not LayerKind.AFFINE:
        return Layer(kind=kind)

    try:
        rows = int(fields["rows"])
        cols = int(fields["cols"])
        lr_multiplier = float(fields["lr_multiplier"])
    except (KeyError, ValueError):
        raise lines.error("affine layer needs rows, cols and lr_multiplier") from None

    weights = np.array([_parse_row(lines.next(), cols, lines) for _ in range(rows)])
    bias = np.array(_parse_row(lines.next(), cols, lines))
    return Layer.affine(weights.reshape(rows, cols), bias, lr_multiplier=lr_multiplier)


def load_checkpoint(path: str | Path) -> tuple[Network, dict[str, str]]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DataIOError(f"Cannot read checkpoint: {e}", file=str(p)) from e
    return parse_checkpoint(text, filename=str(p))


__all__ = [
    "CHECKPOINT_FORMAT",
    "CHECKPOINT_VERSION",
    "format_checkpoint",
    "load_checkpoint",
    "parse_checkpoint",
    "save_checkpoint",
]
