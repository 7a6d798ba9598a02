import re

import numpy as np

from vadecon.plot import Annotation, AnnotationStyle, emit_plot, render_svg
from vadecon.series import MonthlySeries


def _series(n=12, gaps=()):
    v = np.sin(np.arange(n) / 2.0)
    v[list(gaps)] = np.nan
    return MonthlySeries.from_values((2020, 1), v, label="demo")


def _count(svg, tag, cls):
    return len(re.findall(rf'<{tag} class="{cls}"', svg))


def test_break_and_shade_counts():
    ann = [Annotation((2020, 4), "slump", AnnotationStyle.RECESSION_SHADED, end=(2020, 6))]
    svg = render_svg(_series(), [5], ann)
    assert _count(svg, "line", "break") == 1
    assert _count(svg, "rect", "shade") == 1
    assert _count(svg, "line", "marker") == 0


def test_plain_series_only():
    svg = render_svg(_series(), None, [])
    assert _count(svg, "polyline", "series") == 1
    assert "<line" not in svg and 'class="shade"' not in svg


def test_gaps_split_polylines():
    svg = render_svg(_series(gaps=(4, 5)), None, [])
    assert _count(svg, "polyline", "series") == 2


def test_isolated_point():
    svg = render_svg(_series(gaps=(1,)), None, [])
    assert _count(svg, "circle", "series-point") == 1


def test_dotted_marker_and_parse():
    a = Annotation.parse({"date": "2020-03-15", "label": "new chair"})
    assert a.style is AnnotationStyle.PRESIDENCY_DOTTED and a.start == (2020, 3)
    svg = render_svg(_series(), [], [a])
    assert _count(svg, "line", "marker") == 1
    assert 'stroke-dasharray' in svg


def test_deterministic_file(tmp_path):
    s = _series()
    emit_plot(s, [3, 8], [], tmp_path / "a.svg", title="x & y")
    emit_plot(s, [3, 8], [], tmp_path / "b.svg", title="x & y")
    a = (tmp_path / "a.svg").read_bytes()
    assert a == (tmp_path / "b.svg").read_bytes()
    assert b"x &amp; y" in a
