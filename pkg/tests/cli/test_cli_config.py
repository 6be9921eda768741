from pathlib import Path

import pytest

from deep_coral.cli.config import (
    ExperimentConfig,
    config_hash,
    load_experiment_config,
    parse_config_text,
    parse_experiment_config,
    render_config,
    render_manifest,
)
from deep_coral.diagnostics.errors import ConfigError, DataIOError


def test_defaults_are_the_standard_benchmark() -> None:
    cfg = ExperimentConfig()

    assert cfg.seed == 0
    assert cfg.shift.dim == 10
    assert cfg.hidden_dims == (32,)
    assert not cfg.uses_files


def test_parse_flat_key_values() -> None:
    cfg = parse_experiment_config(
        "# shorter run\n"
        "\n"
        "iterations = 300\n"
        "lambda = 1.0, 0.5\n"
        "taps = 0,2\n"
        "hidden_dims = 16,8\n"
        "auto_lambda = yes\n"
    )

    assert cfg.train.iterations == 300
    assert cfg.train.lambdas == (1.0, 0.5)
    assert cfg.taps == (0, 2)
    assert cfg.hidden_dims == (16, 8)
    assert cfg.train.auto_lambda


def test_aliases_set_both_halves() -> None:
    cfg = parse_experiment_config("seed = 7\nbatch = 16\n")

    assert (cfg.train.seed, cfg.shift.seed) == (7, 7)
    assert (cfg.train.batch_source, cfg.train.batch_target) == (16, 16)


def test_changing_dim_clears_the_sized_transform() -> None:
    cfg = parse_experiment_config("dim = 4\n")

    assert cfg.shift.dim == 4
    assert cfg.shift.scale == ()
    assert cfg.shift.offset == ()


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("iterations 10\n", 1),
        ("# c\nbogus = 1\n", 2),
        ("lr = 0.1\nlr = 0.2\n", 2),
        ("\niterations = ten\n", 2),
        ("auto_lambda = maybe\n", 1),
        ("rotation_dims = 1\n", 1),
        ("out =\n", 1),
    ],
)
def test_errors_carry_the_line(text: str, line: int) -> None:
    with pytest.raises(ConfigError) as info:
        parse_experiment_config(text, filename="run.cfg")

    assert info.value.file == "run.cfg"
    assert info.value.line == line


def test_source_and_target_go_together() -> None:
    with pytest.raises(ConfigError):
        parse_experiment_config("source = s.csv\n")


def test_overrides_win_over_the_file(tmp_path: Path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text("iterations = 300\nlr = 0.5\n", encoding="utf-8")

    cfg = load_experiment_config(path, {"iterations": "20"})

    assert cfg.train.iterations == 20
    assert cfg.train.lr == 0.5


def test_bad_override_names_the_command_line() -> None:
    with pytest.raises(ConfigError) as info:
        load_experiment_config(None, {"iterations": "x"})
    assert info.value.file == "<command line>"


def test_unreadable_config_is_an_io_error(tmp_path: Path) -> None:
    with pytest.raises(DataIOError):
        load_experiment_config(tmp_path / "missing.cfg")


def test_manifest_round_trips_to_the_same_hash(tmp_path: Path) -> None:
    cfg = parse_experiment_config(
        "seed = 3\nauto_lambda = true\nrotation_deg = 60\n", base=ExperimentConfig()
    )
    cfg = cfg.with_overrides({"out": (tmp_path / "x").as_posix()})

    manifest = render_manifest(cfg, artifact="train", calibrated_lambdas=(4.5,))
    again = parse_experiment_config(manifest)

    assert manifest.startswith("# deep-coral manifest\nartifact=train\n")
    assert "calibrated_lambdas=4.5\n" in manifest
    assert render_config(again) == render_config(cfg)
    assert config_hash(again) == config_hash(cfg)


def test_hash_ignores_the_output_directory() -> None:
    a = ExperimentConfig()
    b = a.with_overrides({"out": "elsewhere"})
    c = a.with_overrides({"lr": "0.01"})

    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)


def test_raw_parse_skips_provenance() -> None:
    raw = parse_config_text("config_hash=abc\nversion=1\nlr = 0.1\n")
    assert raw == {"lr": "0.1"}


@pytest.mark.parametrize(
    ("text", "line", "cause"),
    [
        ("iterations = 0\n", 1, "TRN230"),
        ("lr = 0.01\n\neval_every = 0\n", 3, "TRN230"),
        ("# spec\nrotation_deg = 30\nscale = 1,2\n", 3, "DAT300"),
        ("lr = 0.01\nsource = s.csv\n", 2, "CFG400"),
    ],
)
def test_invalid_values_are_located_config_errors(text: str, line: int, cause: str) -> None:
    with pytest.raises(ConfigError) as info:
        parse_experiment_config(text, filename="run.cfg")

    assert info.value.code == "CFG400"
    assert (info.value.file, info.value.line) == ("run.cfg", line)
    assert getattr(info.value.__cause__, "code", None) == cause


def test_invalid_override_value_names_the_command_line() -> None:
    with pytest.raises(ConfigError) as info:
        load_experiment_config(None, {"iterations": "0"})

    assert info.value.file == "<command line>"
    assert "iterations" in info.value.message
