"""Deterministic SVG line charts for curve series. No plotting library."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import EmptyCurveError
from .sieve import CurveSeries

_AXIS_LABELS = {
    "roc": ("False positive rate", "True positive rate"),
    "precision": ("Rank threshold R", "Precision"),
    "correlation": ("Rank threshold R", "Correlation r"),
}
_TITLES = {"roc": "ROC curve", "precision": "Precision vs rank threshold",
           "correlation": "Correlation vs rank threshold"}


@dataclass(frozen=True)
class SvgOptions:
    width: int = 640
    height: int = 480
    margin_left: int = 70
    margin_right: int = 20
    margin_top: int = 40
    margin_bottom: int = 60
    title: str | None = None
    stroke: str = "#1f5fa8"
    ticks: int = 5

    @property
    def plot_width(self) -> int:
        return self.width - self.margin_left - self.margin_right

    @property
    def plot_height(self) -> int:
        return self.height - self.margin_top - self.margin_bottom


def _domain(values: list[float], lo: float | None = None, hi: float | None = None) -> tuple[float, float]:
    a = min(values) if lo is None else min(lo, min(values))
    b = max(values) if hi is None else max(hi, max(values))
    if a == b:
        a, b = a - 1.0, b + 1.0
    return a, b


def curve_domains(curve: CurveSeries) -> tuple[tuple[float, float], tuple[float, float]]:
    xs = [p.x for p in curve.points]
    ys = [p.y for p in curve.points]
    if curve.kind == "roc":
        return (0.0, 1.0), (0.0, 1.0)
    if curve.kind == "precision":
        return _domain(xs), (0.0, max(1.0, max(ys)))
    return _domain(xs), _domain(ys, 0.0, 0.0)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(curve: CurveSeries, options: SvgOptions | None = None) -> bytes:
    """Render ``curve`` as a standalone SVG 1.1 document.

    Output bytes depend only on ``curve`` and ``options``.
    """
    if not curve.points:
        raise EmptyCurveError(f"{curve.kind} curve has no points")
    o = options or SvgOptions()
    (x0, x1), (y0, y1) = curve_domains(curve)
    left, top = o.margin_left, o.margin_top
    right, bottom = left + o.plot_width, top + o.plot_height

    def px(x: float) -> float:
        return left + (x - x0) / (x1 - x0) * o.plot_width

    def py(y: float) -> float:
        return bottom - (y - y0) / (y1 - y0) * o.plot_height

    title = o.title or _TITLES[curve.kind]
    if curve.auc is not None:
        title += f" (AUC = {curve.auc:.3f})"
    xlabel, ylabel = _AXIS_LABELS[curve.kind]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{o.width}" '
        f'height="{o.height}" viewBox="0 0 {o.width} {o.height}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{o.width / 2:.1f}" y="{top / 2 + 6:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<g stroke="#000" stroke-width="1">'
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/></g>',
    ]

    tick_parts = []
    for i in range(o.ticks + 1):
        xv = x0 + (x1 - x0) * i / o.ticks
        yv = y0 + (y1 - y0) * i / o.ticks
        tx, ty = px(xv), py(yv)
        tick_parts.append(
            f'<line x1="{_fmt(tx)}" y1="{bottom}" x2="{_fmt(tx)}" y2="{bottom + 5}" stroke="#000"/>'
            f'<text x="{_fmt(tx)}" y="{bottom + 18}" text-anchor="middle">{xv:.3g}</text>'
            f'<line x1="{left - 5}" y1="{_fmt(ty)}" x2="{left}" y2="{_fmt(ty)}" stroke="#000"/>'
            f'<text x="{left - 8}" y="{_fmt(ty + 4)}" text-anchor="end">{yv:.3g}</text>'
        )
    out.append('<g font-family="sans-serif" font-size="11">' + "".join(tick_parts) + "</g>")

    out.append(
        f'<text x="{(left + right) / 2:.1f}" y="{o.height - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{(top + bottom) / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 18 {(top + bottom) / 2:.1f})">{escape(ylabel)}</text>'
    )

    if curve.kind == "roc":
        out.append(
            f'<line x1="{_fmt(px(0))}" y1="{_fmt(py(0))}" x2="{_fmt(px(1))}" y2="{_fmt(py(1))}" '
            'stroke="#999" stroke-dasharray="4 4"/>'
        )
    elif y0 < 0.0 < y1:
        out.append(
            f'<line x1="{left}" y1="{_fmt(py(0))}" x2="{right}" y2="{_fmt(py(0))}" '
            'stroke="#999" stroke-dasharray="4 4"/>'
        )

    pts = " ".join(f"{_fmt(px(p.x))},{_fmt(py(p.y))}" for p in curve.points)
    out.append(f'<polyline fill="none" stroke={quoteattr(o.stroke)} stroke-width="1.5" points="{pts}"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
