import json

from rich.console import Console

from deep_coral.cli.render import (
    render_gradcheck,
    render_issues,
    render_metrics,
    render_report,
)
from deep_coral.diagnostics.issue import Issue, Severity
from deep_coral.gradcheck.suite import CheckResult, GradcheckReport
from deep_coral.trainer.metrics import MetricsRecord


def test_render_issues_rich_groups_by_file_and_sorts_by_line() -> None:
    console = Console(record=True, width=120)

    issues = [
        Issue(code="DAT310", severity=Severity.ERROR, message="b", file="b.csv", line=2),
        Issue(code="DAT320", severity=Severity.ERROR, message="a", file="a.csv", line=3),
        Issue(code="DAT310", severity=Severity.ERROR, message="c", file="a.csv", line=1),
    ]

    render_issues(issues, console=console, as_json=False)
    out = console.export_text()

    assert "a.csv" in out
    assert "b.csv" in out
    # Within a.csv, line 1 comes before line 3.
    assert out.index("DAT310") < out.index("DAT320")


def test_render_issues_json_is_strict_json_no_ansi_or_markup() -> None:
    console = Console(record=True, width=40)

    issues = [
        Issue(code="CFG400", severity=Severity.ERROR, message="unknown key [b]", file="b.cfg"),
        Issue(code="CFG400", severity=Severity.ERROR, message="unknown key [a]", file="a.cfg"),
    ]

    render_issues(issues, console=console, as_json=True)
    out = console.export_text()

    assert "\x1b[" not in out
    payload = json.loads(out)
    assert [item["file"] for item in payload] == ["a.cfg", "b.cfg"]
    assert payload[0]["message"] == "unknown key [a]"


def test_render_report_keeps_long_values_on_one_line() -> None:
    console = Console(record=True, width=20)
    values = {"source": "/a/very/long/path/to/source.csv (900 rows)"}

    render_report(values, console=console)
    assert console.export_text().splitlines() == [
        "source: /a/very/long/path/to/source.csv (900 rows)"
    ]

    console = Console(record=True, width=20)
    render_report(values, console=console, as_json=True)
    assert json.loads(console.export_text()) == values


def test_render_metrics_table() -> None:
    console = Console(record=True, width=160)
    record = MetricsRecord(
        iteration=7,
        class_loss=0.5,
        coral_losses=(0.25,),
        joint_loss=0.75,
        source_acc=0.875,
        target_acc=None,
        coral_distance=0.25,
    )

    render_metrics([record], console=console, lambdas=(1.0,))
    out = console.export_text()

    assert "0.8750" in out
    assert "n/a" in out
    assert "lambdas: 1" in out


def test_render_gradcheck_text_and_json() -> None:
    report = GradcheckReport(
        seed=2,
        results=(
            CheckResult("coral", 3, 1e-9, 2e-7, True),
            CheckResult("network lambda=10", 1, 1e-3, 0.5, False),
        ),
    )

    console = Console(record=True, width=200)
    render_gradcheck(report, console=console)
    lines = console.export_text().splitlines()
    assert lines[0] == "gradcheck seed=2"
    assert lines[1] == "coral: cases=3 max_abs_err=1.000e-09 max_rel_err=2.000e-07 PASS"
    assert lines[2].endswith("FAIL")

    console = Console(record=True, width=200)
    render_gradcheck(report, console=console, as_json=True)
    payload = json.loads(console.export_text())
    assert payload["passed"] is False
    assert [c["name"] for c in payload["checks"]] == ["coral", "network lambda=10"]
