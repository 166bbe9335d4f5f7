"""CSV / JSON / SVG writers for position distributions."""

from __future__ import annotations

import json
import math
from html import escape
from typing import Sequence

from .distribution import Distribution

__all__ = ["distribution_rows", "distribution_csv", "stats_json", "distribution_svg"]


def distribution_rows(d: Distribution) -> list[tuple[int, float]]:
    """(position, probability) rows, ascending, without all-zero parity classes.

    A walk from a single site only ever occupies one parity class per step;
    the other class is dropped as a block. Isolated zeros inside a populated
    class are kept.
    """
    rows = list(d.items())
    keep = {par for par in (0, 1) if any(p != 0.0 for x, p in rows if x % 2 == par)}
    return [(x, p) for x, p in rows if x % 2 in keep]


def distribution_csv(d: Distribution) -> str:
    lines = ["position,probability"]
    lines += [f"{x},{p!r}" for x, p in distribution_rows(d)]
    return "\n".join(lines) + "\n"


def stats_json(
    engine: str,
    steps: int,
    mean: float,
    sigma: float,
    tv_vs_analytic: float | None = None,
    seed: int | None = None,
) -> str:
    record = {
        "engine": engine,
        "steps": steps,
        "mean": mean,
        "sigma": sigma,
        "tv_vs_analytic": tv_vs_analytic,
        "seed": seed,
    }
    return json.dumps(record, indent=2) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def distribution_svg(
    d: Distribution,
    overlay: Distribution | None = None,
    title: str = "",
    caption: str = "",
    width: int = 640,
    height: int = 400,
) -> str:
    """Bar chart of ``d`` with an optional dotted line for ``overlay``."""
    rows = distribution_rows(d)
    over = distribution_rows(overlay) if overlay is not None else []
    xs = [x for x, _ in rows] + [x for x, _ in over]
    x_lo, x_hi = min(xs), max(xs)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    y_hi = max([p for _, p in rows] + [p for _, p in over] + [1e-12]) * 1.1

    ml, mr, mt, mb = 60, 20, 40, 60
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x: float) -> float:
        return ml + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y: float) -> float:
        return mt + ph - y / y_hi * ph

    bar_w = max(pw / (x_hi - x_lo + 1) * 1.6, 1.0)
    out: list[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
    ]
    for x, p in rows:
        if p <= 0.0:
            continue
        top = sy(p)
        out.append(
            f'<rect x="{_fmt(sx(x) - bar_w / 2)}" y="{_fmt(top)}" width="{_fmt(bar_w)}" '
            f'height="{_fmt(mt + ph - top)}" fill="#4a78b5"/>'
        )
    if over:
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(p))}" for x, p in over)
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="1.5" '
            f'stroke-dasharray="2,3"/>'
        )
    # axes and ticks
    out.append(
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>'
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>'
    )
    for tx in _ticks(x_lo, x_hi):
        out.append(
            f'<text x="{_fmt(sx(tx))}" y="{mt + ph + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tx:g}</text>'
        )
    for ty in _ticks(0.0, y_hi):
        out.append(
            f'<text x="{ml - 6}" y="{_fmt(sy(ty) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{ty:.3g}</text>'
        )
    out.append(
        f'<text x="{ml + pw / 2}" y="{height - 28}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">position</text>'
    )
    if caption:
        out.append(
            f'<text x="{ml + pw / 2}" y="{height - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{escape(caption)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ticks(lo: float, hi: float, n: int = 5) -> Sequence[float]:
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    stepv = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / stepv) * stepv
    ticks = []
    v = start
    while v <= hi + 1e-12 * span:
        ticks.append(round(v, 12))
        v += stepv
    return ticks
