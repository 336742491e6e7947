"""A small static SVG line chart; output is a pure function of the input."""
from __future__ import annotations

from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def line_chart(series, envelope=None, title="", xlabel="alpha", ylabel="mu",
               width=720, height=480) -> str:
    """``series`` is a list of ``(label, xs, ys)``; ``envelope`` an optional
    ``(label, xs, ys)`` drawn solid and thick, the others dashed."""
    margin_l, margin_r, margin_t, margin_b = 70, 190, 40, 50
    pw = width - margin_l - margin_r
    ph = height - margin_t - margin_b
    everything = list(series) + ([envelope] if envelope else [])
    xs = [x for _, sx, sy in everything for x, y in zip(sx, sy) if y == y]
    ys = [y for _, sx, sy in everything for y in sy if y == y]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys + [0.0]), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    y1 += 0.05 * (y1 - y0)

    def px(x):
        return margin_l + (x - x0) / (x1 - x0) * pw

    def py(y):
        return margin_t + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
           f'<line x1="{margin_l}" y1="{_fmt(py(y0))}" x2="{margin_l + pw}" y2="{_fmt(py(y0))}" stroke="black"/>',
           f'<line x1="{margin_l}" y1="{margin_t}" x2="{margin_l}" y2="{margin_t + ph}" stroke="black"/>']
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{_fmt(px(t))}" y1="{_fmt(py(y0))}" x2="{_fmt(px(t))}" '
                   f'y2="{_fmt(py(y0) + 5)}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px(t))}" y="{_fmt(py(y0) + 18)}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{margin_l - 5}" y1="{_fmt(py(t))}" x2="{margin_l}" y2="{_fmt(py(t))}" stroke="black"/>')
        out.append(f'<text x="{margin_l - 8}" y="{_fmt(py(t) + 4)}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{margin_l + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{margin_t + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {margin_t + ph / 2:.1f})">{escape(ylabel)}</text>')

    def polyline(sx, sy, color, style):
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(sx, sy) if y == y)
        return f'<polyline points="{pts}" fill="none" stroke="{color}" {style}/>'

    legend_y = margin_t + 10
    for k, (label, sx, sy) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        out.append(polyline(sx, sy, color, 'stroke-width="1.5" stroke-dasharray="6,4"'))
        out.append(f'<line x1="{margin_l + pw + 15}" y1="{legend_y}" x2="{margin_l + pw + 40}" '
                   f'y2="{legend_y}" stroke="{color}" stroke-width="1.5" stroke-dasharray="6,4"/>')
        out.append(f'<text x="{margin_l + pw + 46}" y="{legend_y + 4}">{escape(label)}</text>')
        legend_y += 18
    if envelope:
        label, sx, sy = envelope
        out.append(polyline(sx, sy, "black", 'stroke-width="3"'))
        out.append(f'<line x1="{margin_l + pw + 15}" y1="{legend_y}" x2="{margin_l + pw + 40}" '
                   f'y2="{legend_y}" stroke="black" stroke-width="3"/>')
        out.append(f'<text x="{margin_l + pw + 46}" y="{legend_y + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
