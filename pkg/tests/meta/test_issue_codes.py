import re
from pathlib import Path

from deep_coral.diagnostics import errors
from deep_coral.diagnostics.issue import validate_issue_code
from tests.repo_root import repo_root

_CODE_RE = re.compile(r"\b(?:COR|NET|TRN|DAT|CFG|CLI)\d{3}\b")


def _repo_root() -> Path:
    return repo_root(Path(__file__).resolve())


def _iter_python_source_files(root: Path) -> list[Path]:
    return sorted((root / "deep_coral").rglob("*.py"))


def _extract_codes(text: str) -> set[str]:
    return set(_CODE_RE.findall(text))


def _error_classes() -> list[type[errors.CoralError]]:
    return [
        obj
        for obj in vars(errors).values()
        if isinstance(obj, type)
        and issubclass(obj, errors.CoralError)
        and obj is not errors.CoralError
    ]


def test_validate_issue_code_accepts_known_prefixes_and_ranges() -> None:
    assert validate_issue_code("COR001")
    assert validate_issue_code("COR099")

    assert validate_issue_code("NET100")
    assert validate_issue_code("NET199")

    assert validate_issue_code("TRN200")
    assert validate_issue_code("TRN299")

    assert validate_issue_code("DAT300")
    assert validate_issue_code("DAT399")

    assert validate_issue_code("CFG400")
    assert validate_issue_code("CFG499")

    assert validate_issue_code("CLI500")
    assert validate_issue_code("CLI599")


def test_validate_issue_code_rejects_wrong_format_or_range() -> None:
    assert not validate_issue_code("")
    assert not validate_issue_code("cor010")  # must be uppercase
    assert not validate_issue_code("COR01")  # must be ###
    assert not validate_issue_code("COR000")  # below range
    assert not validate_issue_code("COR100")  # above range

    assert not validate_issue_code("NET099")
    assert not validate_issue_code("NET200")

    assert not validate_issue_code("TRN300")
    assert not validate_issue_code("DAT299")
    assert not validate_issue_code("CFG500")
    assert not validate_issue_code("CLI499")
    assert not validate_issue_code("CLI600")

    assert not validate_issue_code("XYZ123")  # unknown prefix


def test_every_error_class_has_a_valid_unique_code() -> None:
    classes = _error_classes()
    codes = [cls.code for cls in classes]

    assert classes
    assert all(validate_issue_code(code) for code in codes), codes
    assert len(codes) == len(set(codes))


def test_issue_codes_used_in_source_are_documented() -> None:
    root = _repo_root()

    documented = _extract_codes(
        (root / "docs" / "issue-codes.md").read_text(encoding="utf-8")
    )

    used: set[str] = set()
    for path in _iter_python_source_files(root):
        used |= _extract_codes(path.read_text(encoding="utf-8"))

    missing = sorted(used - documented)
    assert not missing, (
        "Issue codes used in source but missing from docs/issue-codes.md: "
        + ", ".join(missing)
    )
