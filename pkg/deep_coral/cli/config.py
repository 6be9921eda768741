"""Experiment configuration files.

A config file is flat `key = value` text. `#` starts a comment line, blank
lines are ignored and list values are comma separated::

    # shorter run, two taps
    iterations = 300
    lambda = 1.0
    taps = 1,2
    hidden_dims = 32

Command-line flags arrive as the same key/value strings and override the file.
The canonical rendering (every key, sorted) is what gets hashed, and a
manifest is that rendering plus provenance keys, so any manifest can be fed
back in with `--config`.
"""

import hashlib
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Final

from deep_coral.__about__ import __version__
from deep_coral.data.shift import MeanLayout, ShiftSpec, standard_shift_spec
from deep_coral.diagnostics.errors import (
    BadSpecError,
    ConfigError,
    DataIOError,
    TrainConfigError,
)
from deep_coral.net.network import DEFAULT_HEAD_INIT_STD
from deep_coral.trainer.config import TrainConfig
from deep_coral.trainer.experiment import DEFAULT_HIDDEN_DIMS

COMMAND_LINE: Final = "<command line>"
PROVENANCE_KEYS: Final = frozenset(
    {"config_hash", "version", "artifact", "calibrated_lambdas"}
)
_UNHASHED: Final = frozenset({"out"})


@dataclass(slots=True, frozen=True)
class ExperimentConfig:
    """Everything one `generate` or `train` invocation needs.

    With `source_path` and `target_path` unset, data comes from `shift`.
    """

    train: TrainConfig = field(default_factory=TrainConfig)
    shift: ShiftSpec = field(default_factory=standard_shift_spec)
    hidden_dims: tuple[int, ...] = DEFAULT_HIDDEN_DIMS
    taps: tuple[int, ...] = ()
    head_init_std: float = DEFAULT_HEAD_INIT_STD
    source_only: bool = False
    source_path: Path | None = None
    target_path: Path | None = None
    out_dir: Path = Path("out")

    def __post_init__(self) -> None:
        if any(h < 1 for h in self.hidden_dims):
            raise ConfigError(f"hidden_dims must be positive, got {self.hidden_dims}")
        if not (math.isfinite(self.head_init_std) and self.head_init_std > 0):
            raise ConfigError(f"head_init_std must be > 0, got {self.head_init_std}")
        if (self.source_path is None) != (self.target_path is None):
            raise ConfigError("source and target must be given together")
        if self.train.seed != self.shift.seed:
            raise ConfigError("train and shift seeds must agree")

    @property
    def seed(self) -> int:
        return self.train.seed

    @property
    def num_classes(self) -> int:
        return self.shift.num_classes

    @property
    def uses_files(self) -> bool:
        return self.source_path is not None

    def with_overrides(self, overrides: Mapping[str, str]) -> "ExperimentConfig":
        entries = {key: _Entry(value, None) for key, value in overrides.items()}
        return _build(entries, base=self, filename=COMMAND_LINE)

    def make_out_dir(self) -> Path:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise DataIOError(
                f"Cannot create output directory: {e}", file=str(self.out_dir)
            ) from e
        return self.out_dir


# Value codecs


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in {"true", "yes", "1"}:
        return True
    if lowered in {"false", "no", "0"}:
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.split(",")) if raw.strip() else ()


def _parse_ints(raw: str) -> tuple[int, ...]:
    return tuple(int(v) for v in raw.split(",")) if raw.strip() else ()


def _parse_pair(raw: str) -> tuple[int, int]:
    values = _parse_ints(raw)
    if len(values) != 2:
        raise ValueError("expected two comma-separated integers")
    return values[0], values[1]


def _parse_path(raw: str) -> Path | None:
    return Path(raw.strip()) if raw.strip() else None


def _render(value: object) -> str:
    match value:
        case bool():
            return "true" if value else "false"
        case float():
            return repr(value)
        case tuple():
            return ",".join(_render(v) for v in value)  # pyright: ignore[reportUnknownVariableType]
        case Path():
            return value.as_posix()
        case None:
            return ""
        case _:
            return str(value)


@dataclass(slots=True, frozen=True)
class _Key:
    group: str
    field: str
    parse: Callable[[str], Any]


# Flat key -> dataclass field. `batch` and `seed` are handled separately.
_KEYS: Final[dict[str, _Key]] = {
    "lambda": _Key("train", "lambdas", _parse_floats),
    "auto_lambda": _Key("train", "auto_lambda", _parse_bool),
    "batch_source": _Key("train", "batch_source", int),
    "batch_target": _Key("train", "batch_target", int),
    "lr": _Key("train", "lr", float),
    "momentum": _Key("train", "momentum", float),
    "weight_decay": _Key("train", "weight_decay", float),
    "iterations": _Key("train", "iterations", int),
    "eval_every": _Key("train", "eval_every", int),
    "lr_decay_every": _Key("train", "lr_decay_every", int),
    "lr_decay_gamma": _Key("train", "lr_decay_gamma", float),
    "probe_fraction": _Key("train", "probe_fraction", float),
    "lambda_min": _Key("train", "lambda_min", float),
    "lambda_max": _Key("train", "lambda_max", float),
    "num_classes": _Key("shift", "num_classes", int),
    "dim": _Key("shift", "dim", int),
    "samples_per_class": _Key("shift", "samples_per_class", int),
    "mean_layout": _Key("shift", "mean_layout", MeanLayout),
    "mean_radius": _Key("shift", "mean_radius", float),
    "class_stds": _Key("shift", "class_stds", _parse_floats),
    "rotation_deg": _Key("shift", "rotation_deg", float),
    "rotation_dims": _Key("shift", "rotation_dims", _parse_pair),
    "scale": _Key("shift", "scale", _parse_floats),
    "offset": _Key("shift", "offset", _parse_floats),
    "hidden_dims": _Key("run", "hidden_dims", _parse_ints),
    "taps": _Key("run", "taps", _parse_ints),
    "head_init_std": _Key("run", "head_init_std", float),
    "source_only": _Key("run", "source_only", _parse_bool),
    "source": _Key("run", "source_path", _parse_path),
    "target": _Key("run", "target_path", _parse_path),
    "out": _Key("run", "out_dir", _parse_path),
}
_ALIASES: Final = {"seed": ("train", "shift"), "batch": ("batch_source", "batch_target")}


@dataclass(slots=True, frozen=True)
class _Entry:
    value: str
    line: int | None


def parse_config_text(text: str, *, filename: str | None = None) -> dict[str, str]:
    """Raw `key -> value` pairs of a config file, validated for syntax only."""

    return {key: e.value for key, e in _parse_entries(text, filename=filename).items()}


def _parse_entries(text: str, *, filename: str | None) -> dict[str, _Entry]:
    entries: dict[str, _Entry] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"expected key = value, got {line!r}", file=filename, line=line_no)
        if key in PROVENANCE_KEYS:
            continue
        if key not in _KEYS and key not in _ALIASES:
            raise ConfigError(f"unknown config key {key!r}", file=filename, line=line_no)
        if key in entries:
            raise ConfigError(f"duplicate config key {key!r}", file=filename, line=line_no)
        entries[key] = _Entry(value.strip(), line_no)
    return entries


def _convert(key: str, entry: _Entry, parse: Callable[[str], Any], filename: str | None) -> Any:
    try:
        return parse(entry.value)
    except ValueError as e:
        raise ConfigError(
            f"invalid value for {key}: {entry.value!r} ({e})", file=filename, line=entry.line
        ) from None


def _build(
    entries: Mapping[str, _Entry], *, base: ExperimentConfig, filename: str | None
) -> ExperimentConfig:
    """Apply `entries` to `base`; value errors point at the entry that caused them."""

    try:
        return _assemble(entries, base=base, filename=filename)
    except (TrainConfigError, BadSpecError, ConfigError) as e:
        if e.file is not None:
            raise
        raise ConfigError(
            e.message, file=filename, line=_culprit(entries, base=base, filename=filename)
        ) from e


def _culprit(
    entries: Mapping[str, _Entry], *, base: ExperimentConfig, filename: str | None
) -> int | None:
    # Line of the first entry, in file order, whose addition breaks the config.
    ordered = sorted(entries.items(), key=lambda kv: kv[1].line or 0)
    for n in range(1, len(ordered) + 1):
        try:
            _assemble(dict(ordered[:n]), base=base, filename=filename)
        except (TrainConfigError, BadSpecError, ConfigError):
            return ordered[n - 1][1].line
    return None


def _assemble(
    entries: Mapping[str, _Entry], *, base: ExperimentConfig, filename: str | None
) -> ExperimentConfig:
    groups: dict[str, dict[str, Any]] = {"train": {}, "shift": {}, "run": {}}
    for key, entry in entries.items():
        if key == "seed":
            seed = _convert(key, entry, int, filename)
            groups["train"]["seed"] = seed
            groups["shift"]["seed"] = seed
        elif key == "batch":
            size = _convert(key, entry, int, filename)
            groups["train"]["batch_source"] = size
            groups["train"]["batch_target"] = size
        else:
            spec = _KEYS[key]
            groups[spec.group][spec.field] = _convert(key, entry, spec.parse, filename)

    if "out_dir" in groups["run"] and groups["run"]["out_dir"] is None:
        raise ConfigError("out must not be empty", file=filename, line=entries["out"].line)

    shift_kw = groups["shift"]
    dim = shift_kw.get("dim", base.shift.dim)
    if dim != base.shift.dim:
        # The base transform is sized for the old dimension.
        shift_kw.setdefault("scale", ())
        shift_kw.setdefault("offset", ())

    return replace(
        base,
        train=replace(base.train, **groups["train"]),
        shift=replace(base.shift, **shift_kw),
        **groups["run"],
    )


def parse_experiment_config(
    text: str, *, filename: str | None = None, base: ExperimentConfig | None = None
) -> ExperimentConfig:
    entries = _parse_entries(text, filename=filename)
    return _build(entries, base=base or ExperimentConfig(), filename=filename)


def load_experiment_config(
    path: Path | None = None, overrides: Mapping[str, str] | None = None
) -> ExperimentConfig:
    """Defaults, then the file at `path`, then `overrides`."""

    cfg = ExperimentConfig()
    if path is not None:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise DataIOError(f"Cannot read config file: {e}", file=str(path)) from e
        cfg = parse_experiment_config(text, filename=str(path), base=cfg)
    if overrides:
        cfg = cfg.with_overrides(overrides)
    return cfg


def config_items(cfg: ExperimentConfig) -> dict[str, str]:
    """Canonical `key -> value` strings, sorted by key."""

    groups: dict[str, object] = {"train": cfg.train, "shift": cfg.shift, "run": cfg}
    items = {
        key: _render(getattr(groups[spec.group], spec.field)) for key, spec in _KEYS.items()
    }
    items["seed"] = _render(cfg.seed)
    items["batch_source"] = _render(cfg.train.batch_source)
    items["batch_target"] = _render(cfg.train.batch_target)
    return dict(sorted(items.items()))


def render_config(cfg: ExperimentConfig) -> str:
    return "".join(f"{key}={value}\n" for key, value in config_items(cfg).items())


def config_hash(cfg: ExperimentConfig) -> str:
    """First 16 hex digits of the SHA-256 of the canonical rendering.

    The output directory is not part of the experiment and is left out.
    """

    text = "".join(
        f"{key}={value}\n" for key, value in config_items(cfg).items() if key not in _UNHASHED
    )
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def provenance(cfg: ExperimentConfig) -> dict[str, str]:
    return {"config_hash": config_hash(cfg), "seed": str(cfg.seed), "version": __version__}


def provenance_comments(cfg: ExperimentConfig, *, artifact: str) -> list[str]:
    return [
        f"deep-coral {__version__} {artifact}",
        f"config_hash={config_hash(cfg)} seed={cfg.seed}",
    ]


def render_manifest(
    cfg: ExperimentConfig,
    *,
    artifact: str,
    calibrated_lambdas: tuple[float, ...] | None = None,
) -> str:
    lines = [
        "# deep-coral manifest",
        f"artifact={artifact}",
        f"config_hash={config_hash(cfg)}",
        f"version={__version__}",
    ]
    if calibrated_lambdas is not None:
        lines.append(f"calibrated_lambdas={_render(calibrated_lambdas)}")
    return "\n".join(lines) + "\n" + render_config(cfg)


def write_manifest(
    cfg: ExperimentConfig,
    path: Path,
    *,
    artifact: str,
    calibrated_lambdas: tuple[float, ...] | None = None,
) -> None:
    text = render_manifest(cfg, artifact=artifact, calibrated_lambdas=calibrated_lambdas)
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        raise DataIOError(f"Cannot write output file: {e}", file=str(path)) from e


__all__ = [
    "ExperimentConfig",
    "config_hash",
    "config_items",
    "load_experiment_config",
    "parse_config_text",
    "parse_experiment_config",
    "provenance",
    "provenance_comments",
    "render_config",
    "render_manifest",
    "write_manifest",
]
