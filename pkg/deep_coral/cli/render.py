"""Rendering helpers for CLI output.

Human output uses Rich tables.
JSON output must be strict JSON (no Rich markup / ANSI).
"""

import json
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence

from rich.console import Console
from rich.table import Table

from deep_coral.diagnostics.issue import Issue, issue_sort_key
from deep_coral.gradcheck.suite import GradcheckReport
from deep_coral.trainer.metrics import MetricsRecord


def print_json(payload: object, *, console: Console) -> None:
    text = json.dumps(payload, ensure_ascii=False)
    # No wraps or markup; the output must stay parseable.
    console.print(
        text,
        markup=False,
        highlight=False,
        overflow="ignore",
        crop=False,
        soft_wrap=True,
    )


def render_issues(
    issues: Iterable[Issue],
    *,
    console: Console,
    as_json: bool = False,
) -> None:
    """Render Issues to the given console.

    - `as_json=False`: Rich tables grouped by file.
    - `as_json=True`: strict JSON only.
    """

    issues_list = sorted(issues, key=issue_sort_key)

    if as_json:
        print_json([issue.to_dict() for issue in issues_list], console=console)
        return

    for file, group in _group_by_file(issues_list).items():
        table = Table(title=file, show_header=True, header_style="bold")
        table.add_column("Severity", no_wrap=True)
        table.add_column("Code", no_wrap=True)
        table.add_column("Line", no_wrap=True)
        table.add_column("Message")

        for issue in group:
            table.add_row(
                issue.severity.value,
                issue.code,
                "" if issue.line is None else str(issue.line),
                issue.message,
            )

        console.print(table)


def _group_by_file(issues: list[Issue]) -> dict[str, list[Issue]]:
    grouped: dict[str, list[Issue]] = defaultdict(list)
    for issue in issues:
        key = issue.file if issue.file is not None else "(unknown)"
        grouped[key].append(issue)

    # Deterministic group ordering.
    return dict(sorted(grouped.items(), key=lambda kv: kv[0]))


def _fmt(value: float | None, spec: str = ".6g") -> str:
    return "n/a" if value is None else format(value, spec)


def render_metrics(
    records: Sequence[MetricsRecord],
    *,
    console: Console,
    lambdas: Sequence[float],
    title: str = "training log",
) -> None:
    table = Table(title=title, show_header=True, header_style="bold")
    for name in ("iter", "class_loss", "coral_loss", "joint_loss", "src_acc", "tgt_acc", "distance"):
        table.add_column(name, justify="right", no_wrap=True)
    for r in records:
        table.add_row(
            str(r.iteration),
            _fmt(r.class_loss),
            " ".join(_fmt(v) for v in r.coral_losses),
            _fmt(r.joint_loss),
            _fmt(r.source_acc, ".4f"),
            _fmt(r.target_acc, ".4f"),
            _fmt(r.coral_distance),
        )
    table.caption = "lambdas: " + ", ".join(f"{v:.6g}" for v in lambdas)
    console.print(table)


def render_gradcheck(report: GradcheckReport, *, console: Console, as_json: bool = False) -> None:
    if as_json:
        print_json(
            {
                "seed": report.seed,
                "passed": report.passed,
                "checks": [
                    {
                        "name": r.name,
                        "cases": r.cases,
                        "max_abs_err": r.max_abs_err,
                        "max_rel_err": r.max_rel_err,
                        "passed": r.passed,
                    }
                    for r in report.results
                ],
            },
            console=console,
        )
        return
    for line in report.lines():
        console.print(line, markup=False, highlight=False, soft_wrap=True)


def render_report(values: Mapping[str, str], *, console: Console, as_json: bool = False) -> None:
    """Flat `name: value` report; JSON gets the same mapping."""

    if as_json:
        print_json(dict(values), console=console)
        return
    for name, value in values.items():
        console.print(f"{name}: {value}", markup=False, highlight=False, soft_wrap=True)


__all__ = [
    "print_json",
    "render_gradcheck",
    "render_issues",
    "render_metrics",
    "render_report",
]
