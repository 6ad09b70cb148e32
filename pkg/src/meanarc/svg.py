"""Static SVG rendering: placement scenes and sweep plots.

Everything is emitted through fixed-precision format strings with no
timestamps or environment lookups, so identical inputs produce identical
bytes. Styling lives in a <style> block; inside arcs carry their own CSS
class so they can be told apart from the host trajectory outline.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import SimplePolygon

_SCENE_CSS = """\
    .domain { fill: #e8eef5; stroke: #3d5166; stroke-width: 1.6; }
    .traj { fill: none; stroke: #b34d3a; stroke-width: 0.9; stroke-opacity: 0.65; }
    .arc-in { fill: none; stroke: #1d7a3e; stroke-width: 2.2; stroke-linecap: round; }
    .legend { font: 13px monospace; fill: #1c232b; }
    .legend-box { fill: #ffffff; fill-opacity: 0.85; stroke: #8a97a5; stroke-width: 0.8; }
"""

_PLOT_CSS = """\
    .axis { stroke: #222222; stroke-width: 1.2; }
    .grid { stroke: #cccccc; stroke-width: 0.6; }
    .tick-label, .axis-label, .legend { font: 12px monospace; fill: #1c232b; }
    .series-mc { fill: none; stroke: #1f5fa6; stroke-width: 1.6; }
    .pt-mc { fill: #1f5fa6; }
    .err-mc { stroke: #1f5fa6; stroke-width: 1.0; }
    .series-small { fill: none; stroke: #b34d3a; stroke-width: 1.3; stroke-dasharray: 6 3; }
    .series-plateau { fill: none; stroke: #1d7a3e; stroke-width: 1.3; stroke-dasharray: 2 3; }
    .series-avg { fill: none; stroke: #8a5fa6; stroke-width: 1.3; stroke-dasharray: 9 3 2 3; }
    .marker { stroke: #555555; stroke-width: 1.0; stroke-dasharray: 3 3; }
"""


def _f(x: float) -> str:
    """Fixed short float for SVG attributes."""
    return f"{x:.3f}"


class _Canvas:
    """World-to-pixel mapping with a y flip."""

    def __init__(self, bounds, width, height, pad_frac=0.05):
        xmin, ymin, xmax, ymax = bounds
        span = max(xmax - xmin, ymax - ymin, 1e-12)
        pad = pad_frac * span
        xmin -= pad
        xmax += pad
        ymin -= pad
        ymax += pad
        s = min(width / (xmax - xmin), height / (ymax - ymin))
        self.s = s
        self.x0 = xmin
        self.y1 = ymax
        self.ox = 0.5 * (width - s * (xmax - xmin))
        self.oy = 0.5 * (height - s * (ymax - ymin))

    def to_px(self, pts: np.ndarray) -> np.ndarray:
        px = self.ox + self.s * (pts[:, 0] - self.x0)
        py = self.oy + self.s * (self.y1 - pts[:, 1])
        return np.stack([px, py], axis=1)


def _path(points: np.ndarray, close: bool) -> str:
    parts = [f"M {_f(points[0, 0])} {_f(points[0, 1])}"]
    for x, y in points[1:]:
        parts.append(f"L {_f(x)} {_f(y)}")
    if close:
        parts.append("Z")
    return " ".join(parts)


def _legend_block(lines, x, y, css_class="legend") -> list:
    if not lines:
        return []
    w = 8 * max(len(t) for t in lines) + 14
    h = 18 * len(lines) + 10
    out = [f'<rect class="legend-box" x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}"/>']
    for i, text in enumerate(lines):
        out.append(
            f'<text class="{css_class}" x="{_f(x + 7)}" y="{_f(y + 18 * (i + 1) - 3)}">{text}</text>'
        )
    return out


def render_scene(
    path: str,
    domain: SimplePolygon,
    placements,
    legend_lines=(),
    size: int = 760,
) -> None:
    """Write a scene SVG: the domain, each placed trajectory outline, and
    its inside arcs in a distinct style.

    placements is a sequence of (vertices, ArcReport) pairs, where vertices
    is the moved trajectory loop. An empty sequence renders the domain
    alone. Fully contained placements carry a single full-loop arc in their
    report, so the whole outline takes the inside style.
    """
    xmin, ymin, xmax, ymax = domain.bounds
    for verts, _ in placements:
        xmin = min(xmin, float(verts[:, 0].min()))
        xmax = max(xmax, float(verts[:, 0].max()))
        ymin = min(ymin, float(verts[:, 1].min()))
        ymax = max(ymax, float(verts[:, 1].max()))
    canvas = _Canvas((xmin, ymin, xmax, ymax), size, size)

    body = [f'<path class="domain" d="{_path(canvas.to_px(domain.vertices), close=True)}"/>']
    for verts, report in placements:
        body.append(f'<path class="traj" d="{_path(canvas.to_px(verts), close=True)}"/>')
        for arc in report.arcs:
            pts = canvas.to_px(arc.points)
            closed = bool(np.allclose(arc.points[0], arc.points[-1]))
            body.append(f'<path class="arc-in" d="{_path(pts, closed)}"/>')
    body.extend(_legend_block(list(legend_lines), 10, 10))
    _write_svg(path, size, size, _SCENE_CSS, body)


def render_sweep_plot(
    path: str,
    rows,
    critical_lambda: float | None = None,
    width: int = 860,
    height: int = 540,
) -> None:
    """Write a sweep plot SVG: MC per-arc means with one-sigma bars against
    the closed-form overlays, versus the trajectory scale factor."""
    lams = np.array([r.lam for r in rows])
    mc = np.array([r.estimate.per_arc_mean for r in rows])
    se = np.array([r.estimate.per_arc_stderr for r in rows])
    small = np.array([r.small_trajectory for r in rows])
    plateau = np.array([r.cauchy for r in rows])
    avg = np.array([r.mazzolo for r in rows])

    ml, mr, mt, mb = 64, 18, 16, 46
    iw, ih = width - ml - mr, height - mt - mb
    x_lo, x_hi = float(lams.min()), float(lams.max())
    if x_hi <= x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_candidates = np.concatenate([mc + se, mc - se, small, plateau, avg])
    y_lo = min(0.0, float(y_candidates.min()))
    y_hi = float(y_candidates.max()) * 1.08 + 1e-12

    def px(x):
        return ml + iw * (x - x_lo) / (x_hi - x_lo)

    def py(y):
        return mt + ih * (1.0 - (y - y_lo) / (y_hi - y_lo))

    body = []
    for t in np.linspace(x_lo, x_hi, 6):
        body.append(f'<line class="grid" x1="{_f(px(t))}" y1="{_f(mt)}" x2="{_f(px(t))}" y2="{_f(mt + ih)}"/>')
        body.append(f'<text class="tick-label" x="{_f(px(t) - 12)}" y="{_f(mt + ih + 16)}">{t:.3g}</text>')
    for t in np.linspace(y_lo, y_hi, 6):
        body.append(f'<line class="grid" x1="{_f(ml)}" y1="{_f(py(t))}" x2="{_f(ml + iw)}" y2="{_f(py(t))}"/>')
        body.append(f'<text class="tick-label" x="{_f(6)}" y="{_f(py(t) + 4)}">{t:.3g}</text>')
    body.append(f'<rect class="axis" fill="none" x="{_f(ml)}" y="{_f(mt)}" width="{_f(iw)}" height="{_f(ih)}"/>')
    body.append(f'<text class="axis-label" x="{_f(ml + iw / 2 - 40)}" y="{_f(height - 10)}">trajectory scale factor</text>')

    def series(xs, ys, css):
        pts = np.stack([[px(x) for x in xs], [py(y) for y in ys]], axis=1)
        return f'<path class="{css}" d="{_path(pts, close=False)}"/>'

    body.append(series(lams, small, "series-small"))
    body.append(series(lams, plateau, "series-plateau"))
    body.append(series(lams, avg, "series-avg"))
    body.append(series(lams, mc, "series-mc"))
    for x, y, e in zip(lams, mc, se):
        if math.isfinite(e):
            body.append(
                f'<line class="err-mc" x1="{_f(px(x))}" y1="{_f(py(y - e))}" x2="{_f(px(x))}" y2="{_f(py(y + e))}"/>'
            )
        body.append(f'<circle class="pt-mc" cx="{_f(px(x))}" cy="{_f(py(y))}" r="2.6"/>')
    if critical_lambda is not None and x_lo <= critical_lambda <= x_hi:
        body.append(
            f'<line class="marker" x1="{_f(px(critical_lambda))}" y1="{_f(mt)}" x2="{_f(px(critical_lambda))}" y2="{_f(mt + ih)}"/>'
        )
    body.extend(
        _legend_block(
            [
                "MC per-arc mean (1 sigma bars)",
                "small-trajectory closed form",
                "domain plateau value",
                "all-overlap average",
            ],
            ml + 10,
            mt + 8,
        )
    )
    _write_svg(path, width, height, _PLOT_CSS, body)


def _write_svg(path: str, width: int, height: int, css: str, body: list) -> None:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "  <style>",
        css.rstrip(),
        "  </style>",
        f'  <rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    lines.extend("  " + item for item in body)
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
