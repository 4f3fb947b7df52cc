"""CSV and SVG writers for CLI results."""
from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np


def fmt(x) -> str:
    """Numbers with 12 significant digits; integers and strings verbatim."""
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


_W, _H, _PAD = 640, 480, 60


def _frame(xs: np.ndarray, ys: np.ndarray, equal: bool = False):
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    sx = (_W - 2 * _PAD) / (x1 - x0)
    sy = (_H - 2 * _PAD) / (y1 - y0)
    if equal:
        sx = sy = min(sx, sy)

    def to_px(x, y):
        return _PAD + (x - x0) * sx, _H - _PAD - (y - y0) * sy

    return to_px, (x0, x1, y0, y1)


def _svg(body: list[str], title: str) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n'
        f"<title>{escape(title)}</title>\n"
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _points(pts) -> str:
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)


def svg_plot(curves: dict, markers: dict | None = None, xlabel: str = "theta", ylabel: str = "gamma",
             title: str = "") -> str:
    """Line plot of named ``(x, y)`` curves plus optional scatter series."""
    markers = markers or {}
    all_x = np.concatenate([np.asarray(c[0], float) for c in list(curves.values()) + list(markers.values())])
    all_y = np.concatenate([np.asarray(c[1], float) for c in list(curves.values()) + list(markers.values())])
    to_px, (x0, x1, y0, y1) = _frame(all_x, all_y)
    body = [
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_H - 15}" text-anchor="middle" font-size="14">{escape(xlabel)}</text>',
        f'<text x="18" y="{_H / 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {_H / 2})">{escape(ylabel)}</text>',
        f'<text x="{_PAD}" y="{_H - _PAD + 18}" font-size="11">{fmt(x0)}</text>',
        f'<text x="{_W - _PAD}" y="{_H - _PAD + 18}" text-anchor="end" font-size="11">{fmt(x1)}</text>',
        f'<text x="{_PAD - 4}" y="{_H - _PAD}" text-anchor="end" font-size="11">{fmt(y0)}</text>',
        f'<text x="{_PAD - 4}" y="{_PAD + 4}" text-anchor="end" font-size="11">{fmt(y1)}</text>',
    ]
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for i, (name, (xs, ys)) in enumerate(curves.items()):
        pts = [to_px(x, y) for x, y in zip(xs, ys)]
        body.append(
            f'<polyline fill="none" stroke="{colors[i % 4]}" stroke-width="1.5" points="{_points(pts)}">'
            f"<title>{escape(name)}</title></polyline>"
        )
    for i, (name, (xs, ys)) in enumerate(markers.items()):
        color = colors[(i + len(curves)) % 4]
        body.append(f'<g fill="{color}"><title>{escape(name)}</title>')
        for x, y in zip(xs, ys):
            px, py = to_px(x, y)
            body.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2.5"/>')
        body.append("</g>")
    return _svg(body, title)


def svg_polygon(vertices, title: str = "Wulff shape") -> str:
    """Closed polygon drawn with equal axis scaling."""
    v = np.asarray(vertices, dtype=float)
    to_px, _ = _frame(v[:, 0], v[:, 1], equal=True)
    pts = [to_px(x, y) for x, y in v]
    body = [f'<polygon fill="#cfe2f3" stroke="black" stroke-width="1" points="{_points(pts)}"/>']
    return _svg(body, title)
