"""A minimal static SVG line-plot writer.

Just enough for the profile figures: one x axis, one y axis, a handful of
polylines with solid or dashed strokes, tick labels and a legend. This is
not a plotting library; it exists so the CLI has no plotting dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

#: default stroke colors, cycled over series
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")

_MARGIN_LEFT = 64.0
_MARGIN_RIGHT = 16.0
_MARGIN_TOP = 34.0
_MARGIN_BOTTOM = 46.0


@dataclass
class Series:
    label: str
    y: list
    dashed: bool = False
    color: str | None = None


@dataclass
class LinePlot:
    """Collects series against a common x grid, then renders to SVG text."""

    x: list
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: float = 720.0
    height: float = 440.0
    series: list = field(default_factory=list)

    def add(self, label: str, y, dashed: bool = False, color: str | None = None):
        y = [float(v) for v in y]
        if len(y) != len(self.x):
            raise ValueError(
                f"series {label!r} has {len(y)} points, x grid has {len(self.x)}"
            )
        self.series.append(Series(label=label, y=y, dashed=dashed, color=color))
        return self

    def render(self) -> str:
        if not self.series:
            raise ValueError("nothing to plot")
        xs = [float(v) for v in self.x]
        x_lo, x_hi = min(xs), max(xs)
        y_all = [v for s in self.series for v in s.y]
        y_lo, y_hi = min(y_all), max(y_all)
        if x_hi == x_lo:
            x_hi = x_lo + 1.0
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        # pad the value range a little so curves do not touch the frame
        pad = 0.05 * (y_hi - y_lo)
        y_lo -= pad
        y_hi += pad

        px0 = _MARGIN_LEFT
        px1 = self.width - _MARGIN_RIGHT
        py0 = self.height - _MARGIN_BOTTOM
        py1 = _MARGIN_TOP

        def sx(v):
            return px0 + (v - x_lo) / (x_hi - x_lo) * (px1 - px0)

        def sy(v):
            return py0 + (v - y_lo) / (y_hi - y_lo) * (py1 - py0)

        out = []
        out.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width:.0f}" '
            f'height="{self.height:.0f}" viewBox="0 0 {self.width:.0f} {self.height:.0f}">'
        )
        out.append(f'<rect width="{self.width:.0f}" height="{self.height:.0f}" fill="white"/>')
        if self.title:
            out.append(
                f'<text x="{(px0 + px1) / 2:.1f}" y="20" text-anchor="middle" '
                f'font-family="sans-serif" font-size="14">{_esc(self.title)}</text>'
            )

        for v in _ticks(x_lo, x_hi):
            x = sx(v)
            out.append(
                f'<line x1="{x:.1f}" y1="{py0:.1f}" x2="{x:.1f}" y2="{py0 + 5:.1f}" '
                'stroke="black" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{x:.1f}" y="{py0 + 18:.1f}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{_fmt(v)}</text>'
            )
        for v in _ticks(y_lo, y_hi):
            y = sy(v)
            out.append(
                f'<line x1="{px0 - 5:.1f}" y1="{y:.1f}" x2="{px0:.1f}" y2="{y:.1f}" '
                'stroke="black" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{px0 - 8:.1f}" y="{y + 4:.1f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{_fmt(v)}</text>'
            )
            out.append(
                f'<line x1="{px0:.1f}" y1="{y:.1f}" x2="{px1:.1f}" y2="{y:.1f}" '
                'stroke="#dddddd" stroke-width="0.5"/>'
            )

        # frame after the gridlines so it sits on top
        out.append(
            f'<rect x="{px0:.1f}" y="{py1:.1f}" width="{px1 - px0:.1f}" '
            f'height="{py0 - py1:.1f}" fill="none" stroke="black" stroke-width="1"/>'
        )
        if self.xlabel:
            out.append(
                f'<text x="{(px0 + px1) / 2:.1f}" y="{self.height - 10:.1f}" '
                f'text-anchor="middle" font-family="sans-serif" font-size="12">'
                f"{_esc(self.xlabel)}</text>"
            )
        if self.ylabel:
            cx, cy = 16.0, (py0 + py1) / 2
            out.append(
                f'<text x="{cx:.1f}" y="{cy:.1f}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="12" '
                f'transform="rotate(-90 {cx:.1f} {cy:.1f})">{_esc(self.ylabel)}</text>'
            )

        for i, s in enumerate(self.series):
            color = s.color or PALETTE[i % len(PALETTE)]
            pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xs, s.y))
            dash = ' stroke-dasharray="6 4"' if s.dashed else ""
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"{dash}/>'
            )

        lx, ly = px0 + 10, py1 + 14
        for i, s in enumerate(self.series):
            color = s.color or PALETTE[i % len(PALETTE)]
            dash = ' stroke-dasharray="6 4"' if s.dashed else ""
            y = ly + 16 * i
            out.append(
                f'<line x1="{lx:.1f}" y1="{y - 4:.1f}" x2="{lx + 26:.1f}" y2="{y - 4:.1f}" '
                f'stroke="{color}" stroke-width="1.5"{dash}/>'
            )
            out.append(
                f'<text x="{lx + 32:.1f}" y="{y:.1f}" font-family="sans-serif" '
                f'font-size="11">{_esc(s.label)}</text>'
            )

        out.append("</svg>")
        return "\n".join(out) + "\n"

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())


def _ticks(lo: float, hi: float, target: int = 6) -> list:
    """Round tick positions covering [lo, hi] with a 1-2-5 step."""
    span = hi - lo
    if span <= 0 or not math.isfinite(span):
        return [lo]
    raw = span / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return ticks


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    text = f"{v:.4f}".rstrip("0").rstrip(".")
    return text if text else "0"


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )
