"""Tiny deterministic SVG renderer for report plots.

Hand-rolled on purpose: the output must be byte-identical across runs,
so no timestamps, ids, or library version strings may leak into the files.
"""
from __future__ import annotations

import numpy as np

WIDTH = 520
HEIGHT = 340
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 34, 46

AXIS = "#444444"
INK = "#1f5fa8"
ACCENT = "#d1495b"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _header(title: str) -> list:
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{_escape(title)}</text>']


def _escape(text: str) -> str:
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def _scale(values, lo_pix, hi_pix):
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo

    def to_pix(v):
        return lo_pix + (float(v) - lo) / span * (hi_pix - lo_pix)

    return to_pix, lo, hi


def _axes(parts, x_lo, x_hi, y_lo, y_hi, x_label, y_label):
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" '
                 f'stroke="{AXIS}"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" '
                 f'stroke="{AXIS}"/>')
    parts.append(f'<text x="{x0}" y="{y0 + 16}" font-family="sans-serif" '
                 f'font-size="10" fill="{AXIS}">{_fmt(x_lo)}</text>')
    parts.append(f'<text x="{x1}" y="{y0 + 16}" text-anchor="end" '
                 f'font-family="sans-serif" font-size="10" fill="{AXIS}">'
                 f'{_fmt(x_hi)}</text>')
    parts.append(f'<text x="{x0 - 6}" y="{y0}" text-anchor="end" '
                 f'font-family="sans-serif" font-size="10" fill="{AXIS}">'
                 f'{_fmt(y_lo)}</text>')
    parts.append(f'<text x="{x0 - 6}" y="{y1 + 4}" text-anchor="end" '
                 f'font-family="sans-serif" font-size="10" fill="{AXIS}">'
                 f'{_fmt(y_hi)}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 10}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="11">{_escape(x_label)}</text>')
    parts.append(f'<text x="16" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="11" '
                 f'transform="rotate(-90 16 {(y0 + y1) / 2:.0f})">'
                 f'{_escape(y_label)}</text>')


def _write(path, parts):
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def line_chart(path, xs, ys, title: str, x_label: str = "x",
               y_label: str = "y") -> None:
    parts = _header(title)
    sx, x_lo, x_hi = _scale(xs, MARGIN_L, WIDTH - MARGIN_R)
    sy, y_lo, y_hi = _scale(ys, HEIGHT - MARGIN_B, MARGIN_T)
    _axes(parts, x_lo, x_hi, y_lo, y_hi, x_label, y_label)
    points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{points}" fill="none" stroke="{INK}" '
                 f'stroke-width="1.6"/>')
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="2.4" '
                     f'fill="{INK}"/>')
    _write(path, parts)


def scatter(path, xs, ys, color_values, title: str, x_label: str = "x",
            y_label: str = "y") -> None:
    parts = _header(title)
    sx, x_lo, x_hi = _scale(xs, MARGIN_L, WIDTH - MARGIN_R)
    sy, y_lo, y_hi = _scale(ys, HEIGHT - MARGIN_B, MARGIN_T)
    _axes(parts, x_lo, x_hi, y_lo, y_hi, x_label, y_label)
    if color_values is None:
        colors = [INK] * len(xs)
    else:
        cv = np.asarray(color_values, dtype=float)
        lo, hi = float(cv.min()), float(cv.max())
        span = (hi - lo) or 1.0
        colors = []
        for v in cv:
            t = (float(v) - lo) / span
            r = int(round(31 + t * (209 - 31)))
            g = int(round(95 + t * (73 - 95)))
            b = int(round(168 + t * (91 - 168)))
            colors.append(f"#{r:02x}{g:02x}{b:02x}")
    for x, y, c in zip(xs, ys, colors):
        parts.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="2.2" '
                     f'fill="{c}" fill-opacity="0.8"/>')
    _write(path, parts)


def box_plot(path, labels, samples, title: str, y_label: str = "score") -> None:
    """One box per label; samples is a (n_samples, n_labels) array."""
    samples = np.asarray(samples, dtype=float)
    parts = _header(title)
    n = len(labels)
    sy, y_lo, y_hi = _scale(samples.ravel(), HEIGHT - MARGIN_B, MARGIN_T)
    _axes(parts, 0, n, y_lo, y_hi, "", y_label)
    slot = (WIDTH - MARGIN_L - MARGIN_R) / max(n, 1)
    for i in range(n):
        col = samples[:, i]
        q1, med, q3 = np.percentile(col, [25, 50, 75])
        cx = MARGIN_L + (i + 0.5) * slot
        half = min(16.0, slot * 0.3)
        parts.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(sy(col.min()))}" '
                     f'x2="{_fmt(cx)}" y2="{_fmt(sy(col.max()))}" '
                     f'stroke="{AXIS}"/>')
        parts.append(f'<rect x="{_fmt(cx - half)}" y="{_fmt(sy(q3))}" '
                     f'width="{_fmt(2 * half)}" '
                     f'height="{_fmt(abs(sy(q1) - sy(q3)))}" fill="{INK}" '
                     f'fill-opacity="0.35" stroke="{INK}"/>')
        parts.append(f'<line x1="{_fmt(cx - half)}" y1="{_fmt(sy(med))}" '
                     f'x2="{_fmt(cx + half)}" y2="{_fmt(sy(med))}" '
                     f'stroke="{ACCENT}" stroke-width="1.6"/>')
        parts.append(f'<text x="{_fmt(cx)}" y="{HEIGHT - MARGIN_B + 14}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="8">{_escape(_shorten(labels[i]))}</text>')
    _write(path, parts)


def bar_chart(path, labels, values, title: str, x_label: str = "value") -> None:
    """Horizontal bars (largest magnitude on top)."""
    parts = _header(title)
    values = np.asarray(values, dtype=float)
    n = len(labels)
    span_vals = np.concatenate([[0.0], values])
    sx, x_lo, x_hi = _scale(span_vals, MARGIN_L, WIDTH - MARGIN_R)
    _axes(parts, x_lo, x_hi, 0, n, x_label, "")
    slot = (HEIGHT - MARGIN_T - MARGIN_B) / max(n, 1)
    zero = sx(0.0)
    for i, (label, v) in enumerate(zip(labels, values)):
        y = MARGIN_T + i * slot + slot * 0.15
        x = sx(v)
        left, width = (min(zero, x), abs(x - zero))
        color = INK if v >= 0 else ACCENT
        parts.append(f'<rect x="{_fmt(left)}" y="{_fmt(y)}" '
                     f'width="{_fmt(width)}" height="{_fmt(slot * 0.7)}" '
                     f'fill="{color}" fill-opacity="0.8"/>')
        parts.append(f'<text x="{MARGIN_L - 4}" y="{_fmt(y + slot * 0.55)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="8">{_escape(_shorten(label))}</text>')
    _write(path, parts)


def decision_path(path, step_labels, cumulative, base_value, title: str) -> None:
    """Cumulative log-odds path climbing from the base value (bottom)."""
    parts = _header(title)
    n = len(step_labels)
    all_x = np.concatenate([[base_value], np.asarray(cumulative, dtype=float)])
    sx, x_lo, x_hi = _scale(all_x, MARGIN_L, WIDTH - MARGIN_R)
    sy, _, _ = _scale([0, n], HEIGHT - MARGIN_B, MARGIN_T)
    _axes(parts, x_lo, x_hi, 0, n, "log odds", "")
    base_x = _fmt(sx(base_value))
    parts.append(f'<line x1="{base_x}" y1="{MARGIN_T}" x2="{base_x}" '
                 f'y2="{HEIGHT - MARGIN_B}" stroke="{AXIS}" '
                 f'stroke-dasharray="4 3"/>')
    points = [f"{_fmt(sx(base_value))},{_fmt(sy(0))}"]
    for i, c in enumerate(cumulative):
        points.append(f"{_fmt(sx(c))},{_fmt(sy(i + 1))}")
    parts.append(f'<polyline points="{" ".join(points)}" fill="none" '
                 f'stroke="{ACCENT}" stroke-width="1.8"/>')
    for i, label in enumerate(step_labels):
        parts.append(f'<text x="{MARGIN_L - 4}" y="{_fmt(sy(i + 1) + 3)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="8">{_escape(_shorten(label))}</text>')
    _write(path, parts)


def _shorten(label: str, limit: int = 18) -> str:
    label = str(label)
    return label if len(label) <= limit else label[:limit - 1] + "~"
