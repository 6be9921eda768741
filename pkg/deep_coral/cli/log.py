"""Logging setup for the command line."""

import logging

from rich.console import Console
from rich.logging import RichHandler


def configure_logging(*, verbose: bool = False, no_color: bool = False) -> None:
    """Route library logs through Rich on stderr.

    WARNING by default, DEBUG with `--verbose`. Safe to call more than once.
    """

    level = logging.DEBUG if verbose else logging.WARNING
    handler = RichHandler(
        console=Console(stderr=True, no_color=no_color),
        show_path=False,
        markup=False,
        rich_tracebacks=False,
    )
    root = logging.getLogger("deep_coral")
    for old in list(root.handlers):
        root.removeHandler(old)
    root.addHandler(handler)
    root.setLevel(level)
