"""Minimal deterministic SVG log-log plots."""

from __future__ import annotations

import math

WIDTH, HEIGHT, PAD = 480, 360, 48
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def loglog_svg(series, path, title: str = "", xlabel: str = "log(1/scale)", ylabel: str = "log(count)") -> None:
    """Write polylines of (log x, log y) for each ``(xs, ys, label)`` in ``series``."""
    pts = [[(math.log(x), math.log(y)) for x, y in zip(xs, ys) if x > 0 and y > 0] for xs, ys, _ in series]
    flat = [p for line in pts for p in line] or [(0.0, 0.0)]
    x0, x1 = min(p[0] for p in flat), max(p[0] for p in flat)
    y0, y1 = min(p[1] for p in flat), max(p[1] for p in flat)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def sx(v):
        return PAD + (v - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def sy(v):
        return HEIGHT - PAD - (v - y0) / (y1 - y0) * (HEIGHT - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{PAD / 2:.1f}" text-anchor="middle" font-size="14">{_esc(title)}</text>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">{_esc(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2:.1f}" font-size="12" transform="rotate(-90 14 {HEIGHT / 2:.1f})" '
        f'text-anchor="middle">{_esc(ylabel)}</text>',
    ]
    for k, (line, (_, _, label)) in enumerate(zip(pts, series)):
        color = COLORS[k % len(COLORS)]
        coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in line)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.2"/>')
        for a, b in line:
            out.append(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="2" fill="{color}"/>')
        if label:
            out.append(f'<text x="{WIDTH - PAD}" y="{PAD + 14 * (k + 1)}" text-anchor="end" font-size="10" '
                       f'fill="{color}">{_esc(label)}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
