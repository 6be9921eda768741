import json

from deep_coral.diagnostics.issue import Issue, Severity, issue_sort_key


def test_issue_to_dict_is_json_serializable() -> None:
    issue = Issue(
        code="DAT310",
        severity=Severity.ERROR,
        message="ragged row: expected 3 columns, found 2",
        file="source.csv",
        line=12,
    )

    d = issue.to_dict()

    assert d["severity"] == "ERROR"
    assert d["code"] == "DAT310"
    assert d["file"] == "source.csv"
    assert d["line"] == 12

    json.dumps(d)


def test_issue_pretty_with_location() -> None:
    issue = Issue(
        code="CFG400",
        severity=Severity.ERROR,
        message="unknown config key 'lamda'",
        file="exp.cfg",
        line=2,
    )

    assert issue.pretty() == "exp.cfg:2: ERROR CFG400: unknown config key 'lamda'"


def test_issue_pretty_with_file_only() -> None:
    issue = Issue(code="CLI500", severity=Severity.ERROR, message="boom", file="out")
    assert issue.pretty() == "out: ERROR CLI500: boom"


def test_issue_pretty_without_location() -> None:
    issue = Issue(code="TRN220", severity=Severity.ERROR, message="Diverged.")
    assert issue.pretty() == "ERROR TRN220: Diverged."
    assert str(issue) == issue.pretty()


def test_issue_sort_key_orders_by_location_then_code() -> None:
    issues = [
        Issue(code="DAT310", severity=Severity.ERROR, message="b", file="b.csv", line=2),
        Issue(code="DAT320", severity=Severity.WARN, message="a", file="a.csv", line=3),
        Issue(code="DAT310", severity=Severity.ERROR, message="c", file="a.csv", line=1),
        Issue(code="TRN220", severity=Severity.ERROR, message="no file"),
        Issue(code="CFG400", severity=Severity.ERROR, message="no line", file="a.csv"),
    ]

    ordered = sorted(issues, key=issue_sort_key)

    assert [(i.file, i.line) for i in ordered] == [
        ("a.csv", 1),
        ("a.csv", 3),
        ("a.csv", None),
        ("b.csv", 2),
        (None, None),
    ]
