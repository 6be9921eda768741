"""Minimal SVG line charts: axes, one polyline per series, a legend.

CSV is the canonical output; these files are a convenience for eyeballing
curves and are byte-deterministic for identical inputs.
"""

import math
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from xml.sax.saxutils import escape

from deep_coral.diagnostics.errors import DataIOError
from deep_coral.trainer.metrics import MetricsRecord

WIDTH = 640
HEIGHT = 400
MARGIN = 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _bounds(values: Sequence[float]) -> tuple[float, float]:
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if lo == hi:
        return lo - 0.5, hi + 0.5
    return lo, hi


def line_chart_svg(
    xs: Sequence[float],
    series: Mapping[str, Sequence[float]],
    *,
    title: str,
    x_label: str = "iteration",
    comments: Iterable[str] = (),
) -> str:
    x_lo, x_hi = _bounds(xs)
    y_lo, y_hi = _bounds([v for ys in series.values() for v in ys])
    plot_w = WIDTH - 2 * MARGIN
    plot_h = HEIGHT - 2 * MARGIN

    def px(x: float) -> float:
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        *(f"<!-- {escape(c)} -->" for c in comments),
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{MARGIN / 2:.0f}" text-anchor="middle" '
        f'font-size="14">{escape(title)}</text>',
        # axes
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle" '
        f'font-size="12">{escape(x_label)}</text>',
        f'<text x="{MARGIN - 5}" y="{HEIGHT - MARGIN}" text-anchor="end" '
        f'font-size="10">{y_lo:.4g}</text>',
        f'<text x="{MARGIN - 5}" y="{MARGIN + 10}" text-anchor="end" '
        f'font-size="10">{y_hi:.4g}</text>',
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 15}" text-anchor="middle" '
        f'font-size="10">{x_lo:.4g}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 15}" text-anchor="middle" '
        f'font-size="10">{x_hi:.4g}</text>',
    ]

    for i, (name, ys) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        points = " ".join(
            f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys, strict=True) if math.isfinite(y)
        )
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        ly = MARGIN + 15 * (i + 1)
        out.append(
            f'<text x="{WIDTH - MARGIN - 5}" y="{ly}" text-anchor="end" font-size="11" '
            f'fill="{color}">{escape(name)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def loss_curves(
    records: Sequence[MetricsRecord],
    lambdas: Sequence[float],
    *,
    comments: Iterable[str] = (),
) -> str:
    xs = [float(r.iteration) for r in records]
    series: dict[str, list[float]] = {"class_loss": [r.class_loss for r in records]}
    for tap, lam in enumerate(lambdas):
        if lam:
            series[f"lambda*coral_loss_{tap}"] = [lam * r.coral_losses[tap] for r in records]
        else:
            series[f"coral_loss_{tap}"] = [r.coral_losses[tap] for r in records]
    return line_chart_svg(xs, series, title="classification and CORAL loss", comments=comments)


def accuracy_curves(
    records: Sequence[MetricsRecord], *, comments: Iterable[str] = ()
) -> str:
    xs = [float(r.iteration) for r in records]
    series: dict[str, list[float]] = {"source_acc": [r.source_acc for r in records]}
    if all(r.target_acc is not None for r in records):
        series["target_acc"] = [r.target_acc or 0.0 for r in records]
    return line_chart_svg(xs, series, title="accuracy", comments=comments)


def write_plots(
    records: Sequence[MetricsRecord],
    lambdas: Sequence[float],
    out_dir: Path,
    *,
    comments: Iterable[str] = (),
) -> list[Path]:
    notes = list(comments)
    written: list[Path] = []
    for name, text in (
        ("loss.svg", loss_curves(records, lambdas, comments=notes)),
        ("accuracy.svg", accuracy_curves(records, comments=notes)),
    ):
        path = out_dir / name
        try:
            path.write_text(text, encoding="utf-8", newline="\n")
        except OSError as e:
            raise DataIOError(f"Cannot write output file: {e}", file=str(path)) from e
        written.append(path)
    return written


__all__ = ["accuracy_curves", "line_chart_svg", "loss_curves", "write_plots"]
