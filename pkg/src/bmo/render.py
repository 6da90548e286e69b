"""Static SVG rendering of agent emergence paths.

Output is a pure function of the trace contents: fixed canvas, fixed
number formatting, no timestamps, so re-rendering a trace always yields
identical bytes. Three-dimensional traces are drawn as their (x0, x1)
projection.
"""

from __future__ import annotations

from .errors import BmoError
from .state import RunTrace

CANVAS = 640.0
MARGIN = 40.0


def _fmt(v: float) -> str:
    return "%.2f" % v


class _Projector:
    def __init__(self, bounds):
        self.x0, self.x1 = float(bounds[0][0]), float(bounds[0][1])
        self.y0, self.y1 = float(bounds[1][0]), float(bounds[1][1])
        span = max(self.x1 - self.x0, self.y1 - self.y0)
        self.scale = (CANVAS - 2.0 * MARGIN) / span

    def px(self, x: float) -> float:
        return MARGIN + (x - self.x0) * self.scale

    def py(self, y: float) -> float:
        # svg y grows downward
        return CANVAS - MARGIN - (y - self.y0) * self.scale


def render_paths(trace: RunTrace) -> bytes:
    """Render one polyline per agent plus bounds frame and peak markers."""
    proj = _Projector(trace.bounds.tolist())
    n = trace.n_agents
    pos = trace.positions_over_time()

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(CANVAS)}" '
        f'height="{int(CANVAS)}" viewBox="0 0 {int(CANVAS)} {int(CANVAS)}">',
        f'<rect x="0" y="0" width="{int(CANVAS)}" height="{int(CANVAS)}" fill="white"/>',
    ]

    fx0, fy0 = proj.px(proj.x0), proj.py(proj.y1)
    fw = (proj.x1 - proj.x0) * proj.scale
    fh = (proj.y1 - proj.y0) * proj.scale
    parts.append(
        f'<rect class="bounds" x="{_fmt(fx0)}" y="{_fmt(fy0)}" width="{_fmt(fw)}" '
        f'height="{_fmt(fh)}" fill="none" stroke="#444" stroke-width="1"/>'
    )

    peaks = _known_peaks(trace)
    for peak in peaks:
        cx, cy = proj.px(float(peak[0])), proj.py(float(peak[1]))
        r = 6.0
        parts.append(
            f'<g class="peak"><line x1="{_fmt(cx - r)}" y1="{_fmt(cy)}" '
            f'x2="{_fmt(cx + r)}" y2="{_fmt(cy)}" stroke="black" stroke-width="1.5"/>'
            f'<line x1="{_fmt(cx)}" y1="{_fmt(cy - r)}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(cy + r)}" stroke="black" stroke-width="1.5"/></g>'
        )
        if trace.capture_radius:
            parts.append(
                f'<circle class="capture" cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                f'r="{_fmt(trace.capture_radius * proj.scale)}" fill="none" '
                'stroke="#888" stroke-width="1" stroke-dasharray="4 3"/>'
            )

    for i in range(n):
        hue = (i * 360) // max(n, 1)
        points = " ".join(
            f"{_fmt(proj.px(float(pos[t, i, 0])))},{_fmt(proj.py(float(pos[t, i, 1])))}"
            for t in range(pos.shape[0])
        )
        parts.append(
            f'<polyline class="agent" points="{points}" fill="none" '
            f'stroke="hsl({hue},70%,45%)" stroke-width="1.5"/>'
        )
        # start and end dots
        sx, sy = proj.px(float(pos[0, i, 0])), proj.py(float(pos[0, i, 1]))
        ex, ey = proj.px(float(pos[-1, i, 0])), proj.py(float(pos[-1, i, 1]))
        parts.append(
            f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="2.5" fill="none" '
            f'stroke="hsl({hue},70%,45%)" stroke-width="1"/>'
        )
        parts.append(
            f'<circle cx="{_fmt(ex)}" cy="{_fmt(ey)}" r="3" '
            f'fill="hsl({hue},70%,45%)"/>'
        )

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def _known_peaks(trace: RunTrace) -> list:
    try:
        from .config import build_field

        field = build_field(trace.field_spec)
    except BmoError:
        return []
    peaks = field.known_peaks(trace.n_steps)
    return list(peaks) if peaks else []
