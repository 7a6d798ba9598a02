"""Dependency-free SVG line charts with break and event annotations.

Element classes used in the output (stable, relied on by tests):

* ``series`` - one ``<polyline>`` per run of consecutive non-missing slots
* ``break`` - solid red vertical ``<line>`` per break date
* ``marker`` - dotted vertical ``<line>`` per point annotation
* ``shade`` - ``<rect>`` per interval annotation
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence
from xml.sax.saxutils import escape

from .econ.breaks import BreakResult
from .series import MonthlySeries, format_month, month_index, parse_month

WIDTH, HEIGHT = 800, 360
MARGIN = dict(left=60, right=20, top=30, bottom=40)


class AnnotationStyle(str, enum.Enum):
    PRESIDENCY_DOTTED = "presidency-dotted"
    BREAK_SOLID = "break-solid"
    RECESSION_SHADED = "recession-shaded"


@dataclass(frozen=True)
class Annotation:
    """A labeled date (``end`` is None) or month interval."""

    start: tuple[int, int]
    label: str = ""
    style: AnnotationStyle = AnnotationStyle.PRESIDENCY_DOTTED
    end: tuple[int, int] | None = None

    @classmethod
    def parse(cls, spec: dict) -> "Annotation":
        style = AnnotationStyle(spec.get("style", AnnotationStyle.PRESIDENCY_DOTTED.value))
        end = spec.get("end")
        return cls(
            parse_month(spec["date"][:7]),
            spec.get("label", ""),
            style,
            parse_month(end[:7]) if end else None,
        )


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(
    series: MonthlySeries,
    breaks: BreakResult | Sequence[int] | None = None,
    annotations: Sequence[Annotation] = (),
    title: str | None = None,
) -> str:
    """Return the chart as an SVG document string.

    ``breaks`` may be a :class:`BreakResult` or a list of slot indices into
    ``series``.
    """
    n = len(series)
    s0 = month_index(series.start)
    vals = series.values
    finite = vals[~series.missing_mask]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = MARGIN["top"], HEIGHT - MARGIN["bottom"]

    def sx(i: float) -> float:
        return x0 + (x1 - x0) * (i / (n - 1) if n > 1 else 0.5)

    def sy(v: float) -> float:
        return y1 - (y1 - y0) * (v - lo) / (hi - lo)

    def clip_index(ym: tuple[int, int]) -> float:
        return min(max(month_index(ym) - s0, 0), n - 1)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect class="background" x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title or series.label:
        out.append(
            f'<text class="title" x="{WIDTH / 2:.0f}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title or series.label)}</text>'
        )

    for a in annotations:
        if a.end is None:
            continue
        xa, xb = sx(clip_index(a.start)), sx(clip_index(a.end))
        out.append(
            f'<rect class="shade" x="{_fmt(xa)}" y="{y0}" width="{_fmt(max(xb - xa, 0.0))}" '
            f'height="{y1 - y0}" fill="#cccccc" fill-opacity="0.5"><title>{escape(a.label)}</title></rect>'
        )

    # axes as paths so they never count as annotation lines
    out.append(f'<path class="axis" d="M{x0},{y0} V{y1} H{x1}" stroke="black" fill="none"/>')
    for frac in (0.0, 0.5, 1.0):
        v = lo + pad + frac * (hi - lo - 2 * pad)
        out.append(
            f'<text class="tick" x="{x0 - 6}" y="{_fmt(sy(v) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{v:.3g}</text>'
        )
    ticks = sorted({0, n - 1, *range(0, n, max(1, 12 * math.ceil(n / 120)))})
    for i in ticks:
        ym = (((s0 + i) // 12), (s0 + i) % 12 + 1)
        out.append(
            f'<text class="tick" x="{_fmt(sx(i))}" y="{y1 + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{format_month(ym)}</text>'
        )

    run: list[str] = []
    runs: list[list[str]] = []
    for i, v in enumerate(vals):
        if math.isnan(v):
            if run:
                runs.append(run)
            run = []
        else:
            run.append(f"{_fmt(sx(i))},{_fmt(sy(v))}")
    if run:
        runs.append(run)
    for pts in runs:
        if len(pts) == 1:
            x, y = pts[0].split(",")
            out.append(f'<circle class="series-point" cx="{x}" cy="{y}" r="2" fill="steelblue"/>')
        else:
            out.append(
                f'<polyline class="series" points="{" ".join(pts)}" fill="none" '
                f'stroke="steelblue" stroke-width="1.5"/>'
            )

    for a in annotations:
        if a.end is not None:
            continue
        x = _fmt(sx(clip_index(a.start)))
        dash = "" if a.style is AnnotationStyle.BREAK_SOLID else ' stroke-dasharray="2,3"'
        cls = "break" if a.style is AnnotationStyle.BREAK_SOLID else "marker"
        color = "red" if cls == "break" else "black"
        out.append(
            f'<line class="{cls}" x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="{color}"{dash}>'
            f"<title>{escape(a.label)}</title></line>"
        )

    if isinstance(breaks, BreakResult):
        idx = breaks.break_indices
    else:
        idx = list(breaks or [])
    for i in idx:
        x = _fmt(sx(min(max(i, 0), n - 1)))
        ym = (((s0 + i) // 12), (s0 + i) % 12 + 1)
        out.append(
            f'<line class="break" x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="red" stroke-width="1.5">'
            f"<title>break {format_month(ym)}</title></line>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(
    series: MonthlySeries,
    breaks: BreakResult | Sequence[int] | None,
    annotations: Sequence[Annotation],
    path: str | PathLike,
    title: str | None = None,
) -> None:
    """Write :func:`render_svg` output to ``path``."""
    svg = render_svg(series, breaks, annotations, title)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
