"""Four-panel SVG figure built from an :class:`AuditResult`, no plotting library."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import ReportError

PANEL = 300  # square plot area, px
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 55
CELL_W = PANEL + MARGIN_L + MARGIN_R
CELL_H = PANEL + MARGIN_T + MARGIN_B
GREYS = ["#333333", "#999999", "#666666", "#bbbbbb", "#111111"]
MARKERS = ["circle", "square", "diamond", "triangle"]


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        if t >= lo - step * 1e-9:
            ticks.append(round(t, 12))
        t += step
    return ticks


def _label(v: float) -> str:
    return f"{v:g}" if abs(v) >= 1e-3 or v == 0 else f"{v:.1e}"


class Axes:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0
        self.parts: list[str] = []

    def px(self, x: float) -> float:
        return MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * PANEL

    def py(self, y: float) -> float:
        return MARGIN_T + PANEL - (y - self.y0) / (self.y1 - self.y0) * PANEL

    def frame(self, title, xlabel, ylabel, xticks=None, yticks=None, xticklabels=None):
        p = self.parts
        p.append(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{PANEL}" height="{PANEL}" '
                 f'fill="none" stroke="#000" stroke-width="1"/>')
        for i, t in enumerate(xticks or []):
            x = self.px(t)
            text = xticklabels[i] if xticklabels else _label(t)
            p.append(f'<line x1="{_fmt(x)}" y1="{MARGIN_T + PANEL}" x2="{_fmt(x)}" y2="{MARGIN_T + PANEL + 5}" stroke="#000"/>')
            p.append(f'<text x="{_fmt(x)}" y="{MARGIN_T + PANEL + 18}" text-anchor="middle" font-size="11">{escape(text)}</text>')
        for t in yticks or []:
            y = self.py(t)
            p.append(f'<line x1="{MARGIN_L - 5}" y1="{_fmt(y)}" x2="{MARGIN_L}" y2="{_fmt(y)}" stroke="#000"/>')
            p.append(f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" text-anchor="end" font-size="11">{_label(t)}</text>')
        p.append(f'<text x="{MARGIN_L + PANEL / 2:g}" y="{MARGIN_T - 14}" text-anchor="middle" '
                 f'font-size="14" class="title">{escape(title)}</text>')
        p.append(f'<text x="{MARGIN_L + PANEL / 2:g}" y="{CELL_H - 12}" text-anchor="middle" '
                 f'font-size="12" class="xlabel">{escape(xlabel)}</text>')
        cy = MARGIN_T + PANEL / 2
        p.append(f'<text x="16" y="{cy:g}" text-anchor="middle" font-size="12" class="ylabel" '
                 f'transform="rotate(-90 16 {cy:g})">{escape(ylabel)}</text>')

    def line(self, xs, ys, color, dash=None, width=1.5):
        pts = " ".join(f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>')

    def markers(self, xs, ys, color, shape="circle", size=3.5, opacity=1.0, cls=None):
        c = f' class="{cls}"' if cls else ""
        op = f' fill-opacity="{opacity:g}"' if opacity < 1 else ""
        for x, y in zip(xs, ys):
            cx, cy = self.px(x), self.py(y)
            if shape == "square":
                self.parts.append(f'<rect x="{_fmt(cx - size)}" y="{_fmt(cy - size)}" width="{_fmt(2 * size)}" '
                                  f'height="{_fmt(2 * size)}" fill="{color}"{op}{c}/>')
            else:
                self.parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{size:g}" fill="{color}"{op}{c}/>')

    def bar(self, x_center, width_data, height, color):
        left = self.px(x_center - width_data / 2)
        right = self.px(x_center + width_data / 2)
        top, base = self.py(height), self.py(max(self.y0, 0.0))
        self.parts.append(f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(right - left)}" '
                          f'height="{_fmt(base - top)}" fill="{color}"/>')

    def legend(self, entries):
        for i, (name, color) in enumerate(entries):
            y = MARGIN_T + 14 + 16 * i
            self.parts.append(f'<rect x="{MARGIN_L + 10}" y="{y - 8}" width="10" height="10" fill="{color}"/>')
            self.parts.append(f'<text x="{MARGIN_L + 25}" y="{y + 1}" font-size="11">{escape(name)}</text>')

    def group(self, gid: str, col: int) -> str:
        return (f'<g id="{gid}" class="panel" transform="translate({col * CELL_W},0)">\n'
                + "\n".join(self.parts) + "\n</g>")


def _span(values, pad=0.05):
    lo, hi = min(values), max(values)
    if hi == lo:
        return lo - 1.0, hi + 1.0
    d = (hi - lo) * pad
    return lo - d, hi + d


def _panel_a(result) -> Axes:
    evals = result.evaluations
    top = max(max(e.mse_train, e.mse_test) for e in evals) or 1.0
    ax = Axes((-0.6, 1.6), (0.0, top * 1.15))
    ax.frame("(a) Predictive performance", "", "MSE", xticks=[0, 1], xticklabels=["Train", "Test"],
             yticks=nice_ticks(0.0, top * 1.15))
    k = len(evals)
    width = 0.7 / k
    for i, e in enumerate(evals):
        off = (i - (k - 1) / 2) * width
        color = GREYS[i % len(GREYS)]
        ax.bar(0 + off, width, e.mse_train, color)
        ax.bar(1 + off, width, e.mse_test, color)
    ax.legend([(f"Model {e.realization_id}", GREYS[i % len(GREYS)]) for i, e in enumerate(evals)])
    return ax


def _panel_b(result) -> Axes:
    ax = Axes((0.0, 1.0), (0.0, 1.0))
    ticks = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    ax.frame("(b) Calibration", "Nominal coverage", "Empirical coverage", xticks=ticks, yticks=ticks)
    entries = []
    for i, e in enumerate(result.evaluations):
        color = GREYS[i % len(GREYS)]
        c = e.calibration
        ax.line(c.levels, c.coverage, color, dash=None if i == 0 else "6,3")
        ax.markers(c.levels, c.coverage, color, MARKERS[i % 2])
        entries.append((f"Model {e.realization_id}", color))
    ax.line([0, 1], [0, 1], "#666666", dash="2,3", width=1.0)
    ax.legend(entries + [("Ideal", "#666666")])
    return ax


def _panel_c(result) -> Axes:
    evals = result.evaluations
    xs = [s for e in evals for s in e.robustness.noise_levels]
    ys = [m for e in evals for m in e.robustness.mse]
    ylim = (0.0, max(ys) * 1.1 or 1.0)
    ax = Axes(_span(xs, 0.02), ylim)
    ax.frame("(c) Robustness", "Input noise level", "MSE",
             xticks=nice_ticks(*ax_range(ax, "x")), yticks=nice_ticks(*ylim))
    entries = []
    for i, e in enumerate(evals):
        color = GREYS[i % len(GREYS)]
        r = e.robustness
        ax.line(r.noise_levels, r.mse, color, dash=None if i == 0 else "6,3")
        ax.markers(r.noise_levels, r.mse, color, MARKERS[i % 2])
        entries.append((f"Model {e.realization_id}", color))
    ax.legend(entries)
    return ax


def ax_range(ax: Axes, which: str):
    return (ax.x0, ax.x1) if which == "x" else (ax.y0, ax.y1)


def _target_label(name: str) -> str:
    return "True temperature (T)" if name == "T" else f"True target ({name})"


def _panel_d(result) -> Axes:
    pairs = result.stability.pairs
    xs = [y for p in pairs for y in p.y_true] or [0.0]
    ys = [d for p in pairs for d in p.disagreement] + [0.0]
    lo, hi = _span(ys)
    bound = max(abs(lo), abs(hi))
    if bound == 0:
        bound = 1.0
    ax = Axes(_span(xs), (-bound, bound))
    if len(pairs) == 1:
        a, b = pairs[0].stats.pair
        ylabel = f"Prediction difference ({a} - {b})"
    else:
        ylabel = "Prediction difference"
    ax.frame("(d) Measurement stability", _target_label(result.target_column()), ylabel,
             xticks=nice_ticks(ax.x0, ax.x1), yticks=nice_ticks(-bound, bound))
    for i, p in enumerate(pairs):
        ax.markers(p.y_true, p.disagreement, GREYS[i % len(GREYS)], size=2.5, opacity=0.45, cls="point")
    ax.line([ax.x0, ax.x1], [0.0, 0.0], "#666666", dash="6,4", width=1.2)
    if len(pairs) > 1:
        ax.legend([(f"{p.stats.pair[0]} - {p.stats.pair[1]}", GREYS[i % len(GREYS)]) for i, p in enumerate(pairs)])
    return ax


def figure_svg(result) -> str:
    panels = [_panel_a(result), _panel_b(result), _panel_c(result), _panel_d(result)]
    body = "\n".join(ax.group(f"panel-{c}", i) for i, (c, ax) in enumerate(zip("abcd", panels)))
    return (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{4 * CELL_W}" height="{CELL_H}" '
            f'viewBox="0 0 {4 * CELL_W} {CELL_H}" font-family="Helvetica, Arial, sans-serif">\n'
            f'<rect width="100%" height="100%" fill="#fff"/>\n{body}\n</svg>\n')


def render_figure(result, destination) -> None:
    text = figure_svg(result)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        Path(destination).write_text(text)
    except OSError as exc:
        raise ReportError(f"cannot write figure: {exc}") from None
