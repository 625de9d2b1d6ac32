"""Static SVG rendering of two overlaid KDE contour families.

Pure text generation: given the same inputs and seed the bytes are
identical. Contours come from marching_squares at the five default
iso-proportion thresholds of each model, drawn in two distinguishable
colors with axes, a legend, and the score table embedded as text.
"""

from __future__ import annotations

import numpy as np

from .contours import ContourPolyline, marching_squares
from .kde import default_iso_proportions, fit_kde, grid_evaluate, iso_thresholds
from .pointsets import PointSet, bounding_rect
from .reports import ScoreReport, compute_scores

REAL_COLOR = "#2462ab"
SYNTH_COLOR = "#e8862d"

_W = 840
_H = 620
_ML, _MR, _MT, _MB = 70, 230, 40, 60  # margins: right edge hosts legend/table


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Mapper:
    def __init__(self, rect):
        self.rect = rect
        self.sx = (_W - _ML - _MR) / rect.width
        self.sy = (_H - _MT - _MB) / rect.height

    def px(self, x: float) -> float:
        return _ML + (x - self.rect.x_min) * self.sx

    def py(self, y: float) -> float:
        # SVG y grows downward
        return _H - _MB - (y - self.rect.y_min) * self.sy


def _polyline_path(poly: ContourPolyline, mp: _Mapper) -> str:
    parts = []
    for i, (x, y) in enumerate(poly.vertices):
        cmd = "M" if i == 0 else "L"
        parts.append(f"{cmd}{_fmt(mp.px(x))},{_fmt(mp.py(y))}")
    if poly.closed:
        parts.append("Z")
    return "".join(parts)


def _axis_ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, n)


def fit_contours(ps: PointSet, rect, n_levels: int = 5, grid_n: int = 200):
    """Contour polylines of a point set's KDE at its iso-proportion levels."""
    model = fit_kde(ps)
    grid = grid_evaluate(model, rect, grid_n, grid_n)
    levels = iso_thresholds(model, grid, default_iso_proportions(n_levels))
    return marching_squares(grid, levels.density_thresholds)


def render_svg(
    real: PointSet,
    synth: PointSet,
    report: ScoreReport | None = None,
    seed: int = 0,
    grid_n: int = 200,
) -> str:
    """Build the SVG document for a fit overlay as a string."""
    if report is None:
        report = compute_scores(real, synth, seed=seed)
    rect = bounding_rect(real, synth, margin_frac=0.10)
    mp = _Mapper(rect)
    real_polys = fit_contours(real, rect, grid_n=grid_n)
    synth_polys = fit_contours(synth, rect, grid_n=grid_n)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    # axes ticks and labels
    for xv in _axis_ticks(rect.x_min, rect.x_max):
        px = mp.px(xv)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_H - _MB}" x2="{_fmt(px)}" y2="{_H - _MB + 6}" '
            'stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{_H - _MB + 22}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{xv:.3g}</text>'
        )
    for yv in _axis_ticks(rect.y_min, rect.y_max):
        py = mp.py(yv)
        parts.append(
            f'<line x1="{_ML - 6}" y1="{_fmt(py)}" x2="{_ML}" y2="{_fmt(py)}" '
            'stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_ML - 10}" y="{_fmt(py + 4)}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif">{yv:.3g}</text>'
        )
    parts.append(
        f'<text x="{_ML + (_W - _ML - _MR) / 2:.1f}" y="{_H - 12}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">x</text>'
    )
    parts.append(
        f'<text x="18" y="{_MT + (_H - _MT - _MB) / 2:.1f}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(-90 18 {_MT + (_H - _MT - _MB) / 2:.1f})">y</text>'
    )
    # contour families
    for polys, color, name in (
        (real_polys, REAL_COLOR, "real"),
        (synth_polys, SYNTH_COLOR, "synth"),
    ):
        parts.append(f'<g fill="none" stroke="{color}" stroke-width="1.5" id="{name}-contours">')
        for poly in polys:
            parts.append(f'<path d="{_polyline_path(poly, mp)}"/>')
        parts.append("</g>")
    # legend
    lx = _W - _MR + 20
    parts.append(
        f'<line x1="{lx}" y1="60" x2="{lx + 26}" y2="60" stroke="{REAL_COLOR}" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{lx + 32}" y="64" font-size="13" font-family="sans-serif">'
        f"real: {_esc(real.label)}</text>"
    )
    parts.append(
        f'<line x1="{lx}" y1="82" x2="{lx + 26}" y2="82" stroke="{SYNTH_COLOR}" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{lx + 32}" y="86" font-size="13" font-family="sans-serif">'
        f"synth: {_esc(synth.label)}</text>"
    )
    # score table
    ty = 130
    parts.append(
        f'<text x="{lx}" y="{ty}" font-size="14" font-family="sans-serif" '
        f'font-weight="bold">scores</text>'
    )
    for sv in report.scores:
        ty += 20
        err = f" &#177; {sv.stderr:.3f}" if sv.stderr is not None else ""
        parts.append(
            f'<text x="{lx}" y="{ty}" font-size="13" font-family="monospace">'
            f"{sv.name}: {sv.value:.3f}{err}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(s: str) -> str:
    return (
        s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_fit(
    real: PointSet,
    synth: PointSet,
    out,
    report: ScoreReport | None = None,
    seed: int = 0,
    grid_n: int = 200,
) -> None:
    """Write the fit-overlay SVG for a (real, synth) pair to a file."""
    svg = render_svg(real, synth, report=report, seed=seed, grid_n=grid_n)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
