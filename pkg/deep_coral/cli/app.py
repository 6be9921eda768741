from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import click
import typer
from rich.console import Console

from deep_coral.cli.config import (
    ExperimentConfig,
    config_hash,
    load_experiment_config,
    provenance,
    provenance_comments,
    write_manifest,
)
from deep_coral.cli.log import configure_logging
from deep_coral.cli.plot import write_plots
from deep_coral.cli.render import (
    render_gradcheck,
    render_issues,
    render_metrics,
    render_report,
)
from deep_coral.core.covariance import feature_spread
from deep_coral.core.loss import coral_distance
from deep_coral.data.csvio import count_columns, load_csv, save_csv
from deep_coral.data.dataset import Dataset, Domain
from deep_coral.data.shift import generate_shifted_pair
from deep_coral.diagnostics.errors import CoralError, DimensionMismatchError, ExitCode
from deep_coral.gradcheck.suite import MAX_D, MAX_N, run_gradcheck
from deep_coral.net.checkpoint import load_checkpoint, save_checkpoint
from deep_coral.net.network import Network, forward
from deep_coral.trainer.experiment import run_experiment
from deep_coral.trainer.metrics import write_metrics_csv
from deep_coral.trainer.step import evaluate

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
)


@dataclass(slots=True)
class _CliConfig:
    no_color: bool = False
    verbose: bool = False


def _console(cfg: _CliConfig) -> Console:
    return Console(no_color=cfg.no_color)


def _run(cfg: _CliConfig, *, as_json: bool, body: Callable[[Console], ExitCode]) -> None:
    """Run a command body; coded errors become an Issue report and exit code."""

    console = _console(cfg)
    try:
        code = body(console)
    except CoralError as e:
        render_issues([e.to_issue()], console=console, as_json=as_json)
        raise typer.Exit(code=int(e.exit_code)) from None
    raise typer.Exit(code=int(code))


def _overrides(**values: object) -> dict[str, str]:
    out: dict[str, str] = {}
    for key, value in values.items():
        if value is None or value is False:
            continue
        match value:
            case True:
                out[key] = "true"
            case float():
                out[key] = repr(value)
            case Path():
                out[key] = value.as_posix()
            case _:
                out[key] = str(value)
    return out


def _load_experiment_data(cfg: ExperimentConfig) -> tuple[Dataset, Dataset]:
    if cfg.source_path is None or cfg.target_path is None:
        return generate_shifted_pair(cfg.shift)
    source = load_csv(cfg.source_path, True, cfg.num_classes, domain=Domain.SOURCE)
    target_labeled = count_columns(cfg.target_path) == source.dim + 1
    target = load_csv(cfg.target_path, target_labeled, cfg.num_classes, domain=Domain.TARGET)
    return source, target


def _load_for_network(path: Path, net: Network, *, domain: Domain) -> Dataset:
    """Labels are present when the file has one column more than the network input."""

    columns = count_columns(path)
    if columns not in (net.input_dim, net.input_dim + 1):
        raise DimensionMismatchError(
            f"dataset has {columns} columns, checkpoint expects "
            f"{net.input_dim} features (+1 optional label)",
            file=str(path),
        )
    return load_csv(path, columns == net.input_dim + 1, net.num_classes, domain=domain)


@app.callback()
def _main(
    ctx: typer.Context,
    no_color: bool = typer.Option(
        False,
        "--no-color",
        help="Disable ANSI colors/markup (useful in CI).",
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Log training progress at debug level to stderr.",
    ),
) -> None:
    """Deep CORAL domain adaptation experiments."""

    configure_logging(verbose=verbose, no_color=no_color)
    ctx.obj = _CliConfig(no_color=no_color, verbose=verbose)


_CONFIG_OPTION = typer.Option(None, "--config", help="Flat key=value experiment config file.")
_SEED_OPTION = typer.Option(None, "--seed", help="Random seed (data, init and batching).")
_OUT_OPTION = typer.Option(None, "--out", help="Output directory.")
_JSON_OPTION = typer.Option(False, "--json", help="Print a strict JSON report.")


@app.command("generate")
def cmd_generate(
    config: Path | None = _CONFIG_OPTION,
    seed: int | None = _SEED_OPTION,
    out: Path | None = _OUT_OPTION,
    json_output: bool = _JSON_OPTION,
) -> None:
    """Write a synthetic source/target dataset pair and its manifest."""

    cli: _CliConfig = click.get_current_context().obj

    def body(console: Console) -> ExitCode:
        cfg = load_experiment_config(config, _overrides(seed=seed, out=out))
        out_dir = cfg.make_out_dir()
        source, target = generate_shifted_pair(cfg.shift)

        source_path, target_path = out_dir / "source.csv", out_dir / "target.csv"
        save_csv(source, source_path, comments=provenance_comments(cfg, artifact="source"))
        save_csv(target, target_path, comments=provenance_comments(cfg, artifact="target"))
        write_manifest(cfg, out_dir / "manifest.txt", artifact="generate")

        render_report(
            {
                "source": f"{source_path.as_posix()} ({source.size} rows)",
                "target": f"{target_path.as_posix()} ({target.size} rows)",
                "config_hash": config_hash(cfg),
                "seed": str(cfg.seed),
            },
            console=console,
            as_json=json_output,
        )
        return ExitCode.OK

    _run(cli, as_json=json_output, body=body)


@app.command("train")
def cmd_train(
    config: Path | None = _CONFIG_OPTION,
    seed: int | None = _SEED_OPTION,
    lambdas: str | None = typer.Option(
        None, "--lambda", help="CORAL weight, one per tap or one for all (comma separated)."
    ),
    auto_lambda: bool = typer.Option(
        False, "--auto-lambda", help="Calibrate lambda with a short probe run."
    ),
    iterations: int | None = typer.Option(None, "--iterations", help="SGD steps."),
    batch: int | None = typer.Option(None, "--batch", help="Batch size of both streams."),
    lr: float | None = typer.Option(None, "--lr", help="Base learning rate."),
    taps: str | None = typer.Option(
        None, "--taps", help="Layer indices feeding CORAL losses (comma separated)."
    ),
    source_only: bool = typer.Option(
        False, "--source-only", help="Train without the target stream (no adaptation)."
    ),
    plot: bool = typer.Option(False, "--plot", help="Also write loss.svg and accuracy.svg."),
    out: Path | None = _OUT_OPTION,
    json_output: bool = _JSON_OPTION,
) -> None:
    """Train on labeled source and unlabeled target data; write metrics and a checkpoint."""

    cli: _CliConfig = click.get_current_context().obj

    def body(console: Console) -> ExitCode:
        cfg = load_experiment_config(
            config,
            _overrides(
                seed=seed,
                **{"lambda": lambdas},
                auto_lambda=auto_lambda,
                iterations=iterations,
                batch=batch,
                lr=lr,
                taps=taps,
                source_only=source_only,
                out=out,
            ),
        )
        out_dir = cfg.make_out_dir()
        source, target = _load_experiment_data(cfg)

        result = run_experiment(
            cfg.train,
            source,
            target,
            hidden_dims=cfg.hidden_dims,
            coral_taps=cfg.taps or None,
            head_init_std=cfg.head_init_std,
            source_only=cfg.source_only,
        )

        comments = provenance_comments(cfg, artifact="metrics")
        write_metrics_csv(
            result.records,
            out_dir / "metrics.csv",
            num_taps=len(result.lambdas),
            comments=comments,
        )
        save_checkpoint(
            result.network,
            out_dir / "checkpoint.txt",
            provenance={
                **provenance(cfg),
                "lambdas": ",".join(repr(v) for v in result.lambdas),
            },
        )
        write_manifest(
            cfg,
            out_dir / "manifest.txt",
            artifact="train",
            calibrated_lambdas=result.lambdas if cfg.train.auto_lambda else None,
        )
        if plot:
            write_plots(
                result.records,
                result.lambdas,
                out_dir,
                comments=provenance_comments(cfg, artifact="plot"),
            )

        final = result.final
        if json_output:
            render_report(
                {
                    "metrics": (out_dir / "metrics.csv").as_posix(),
                    "checkpoint": (out_dir / "checkpoint.txt").as_posix(),
                    "lambdas": ",".join(repr(v) for v in result.lambdas),
                    "source_acc": f"{final.source_acc:.4f}",
                    "target_acc": "" if final.target_acc is None else f"{final.target_acc:.4f}",
                    "coral_distance": repr(final.coral_distance),
                    "config_hash": config_hash(cfg),
                },
                console=console,
                as_json=True,
            )
        else:
            render_metrics(result.records, console=console, lambdas=result.lambdas)
        return ExitCode.OK

    _run(cli, as_json=json_output, body=body)


@app.command("eval")
def cmd_eval(
    checkpoint: Path = typer.Argument(..., help="Checkpoint written by `train`."),
    dataset: Path = typer.Argument(..., help="Dataset CSV (labels optional)."),
    target: Path | None = typer.Option(
        None, "--target", help="Second dataset; report the CORAL distance between the two."
    ),
    json_output: bool = _JSON_OPTION,
) -> None:
    """Report accuracy and, given a target dataset, the CORAL distance."""

    cli: _CliConfig = click.get_current_context().obj

    def body(console: Console) -> ExitCode:
        net, _ = load_checkpoint(checkpoint)
        ds = _load_for_network(dataset, net, domain=Domain.SOURCE)
        report: dict[str, str] = {"rows": str(ds.size)}
        if ds.labels is not None:
            report["accuracy"] = f"{evaluate(net, ds.features, ds.labels):.4f}"

        if target is not None:
            tds = _load_for_network(target, net, domain=Domain.TARGET)
            report["target_rows"] = str(tds.size)
            if tds.labels is not None:
                report["target_accuracy"] = f"{evaluate(net, tds.features, tds.labels):.4f}"
            source_pass = forward(net, ds.features)
            target_pass = forward(net, tds.features)
            for tap in net.coral_taps:
                d_s, d_t = source_pass.taps[tap], target_pass.taps[tap]
                report[f"coral_distance[{tap}]"] = f"{coral_distance(d_s, d_t):.6g}"
                report[f"feature_spread[{tap}]"] = (
                    f"{feature_spread(d_s):.6g} / {feature_spread(d_t):.6g}"
                )

        render_report(report, console=console, as_json=json_output)
        return ExitCode.OK

    _run(cli, as_json=json_output, body=body)


@app.command("gradcheck")
def cmd_gradcheck(
    seed: int = typer.Option(0, "--seed", help="Seed for the random instances."),
    max_n: int = typer.Option(MAX_N, "--max-n", help=f"Largest batch size (<= {MAX_N})."),
    max_d: int = typer.Option(MAX_D, "--max-d", help=f"Largest feature dimension (<= {MAX_D})."),
    cases: int = typer.Option(50, "--cases", help="Random instances per check."),
    corrupt: float = typer.Option(1.0, "--corrupt-gradient", hidden=True),
    json_output: bool = _JSON_OPTION,
) -> None:
    """Verify analytic gradients against central finite differences."""

    cli: _CliConfig = click.get_current_context().obj

    def body(console: Console) -> ExitCode:
        report = run_gradcheck(seed, max_n=max_n, max_d=max_d, cases=cases, corrupt=corrupt)
        render_gradcheck(report, console=console, as_json=json_output)
        return ExitCode.OK if report.passed else ExitCode.GRADCHECK

    _run(cli, as_json=json_output, body=body)
