"""SVG rendering of traced images.

Solid polylines for the arcs, dotted grey polylines for the real locus,
open circles at the zeros of T + 1 and filled disks at the zeros of T - 1.
A <metadata> element carries the topological counts as JSON so figures can
be golden-tested without pixel comparison.
"""
from __future__ import annotations

import json
from datetime import datetime, timezone

import numpy as np

CANVAS = 800.0
MARKER_RADIUS = 5.0


def _mapper(center: complex, half: float):
    scale = CANVAS / (2.0 * half)

    def to_px(z: complex) -> tuple[float, float]:
        x = (z.real - (center.real - half)) * scale
        y = CANVAS - (z.imag - (center.imag - half)) * scale
        return x, y

    return to_px


def _path(points, to_px) -> str:
    coords = [to_px(z) for z in np.asarray(points).ravel()]
    steps = [f"{'M' if i == 0 else 'L'}{x:.3f},{y:.3f}" for i, (x, y) in enumerate(coords)]
    return "".join(steps)


def render_svg(
    *,
    arcs,
    crossings,
    endpoints,
    box: tuple[complex, float],
    counts: dict,
    locus=None,
    label: str | None = None,
    timestamp: bool = True,
) -> str:
    """Compose the figure; returns the SVG text."""
    center, half = box
    to_px = _mapper(center, half)

    meta = dict(counts)
    meta["arc_count"] = len(arcs)
    meta["crossing_count"] = len(crossings)
    meta["marker_disk_count"] = sum(1 for e in endpoints if e.side == +1)
    meta["marker_circle_count"] = sum(1 for e in endpoints if e.side == -1)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS:.0f}" height="{CANVAS:.0f}" '
        f'viewBox="0 0 {CANVAS:.0f} {CANVAS:.0f}">',
        f"<metadata id='analysis'>{json.dumps(meta, sort_keys=True)}</metadata>",
    ]
    if label:
        lines.append(f"<title>{label}</title>")
    if timestamp:
        stamp = datetime.now(timezone.utc).isoformat()
        lines.append(f"<desc>generated {stamp}</desc>")
    lines.append(f'<rect width="{CANVAS:.0f}" height="{CANVAS:.0f}" fill="white"/>')

    if locus:
        for chain in locus:
            if len(chain) < 2:
                continue
            lines.append(
                f'<path d="{_path(chain, to_px)}" fill="none" stroke="#888888" '
                'stroke-width="1" stroke-dasharray="2,4"/>'
            )
    for arc in arcs:
        lines.append(
            f'<path d="{_path(arc.points, to_px)}" fill="none" stroke="black" '
            'stroke-width="2"/>'
        )
    for cp in crossings:
        x, y = to_px(cp.location)
        lines.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="2.5" fill="black" '
            'class="crossing"/>'
        )
    for e in endpoints:
        x, y = to_px(e.location)
        if e.side == +1:
            lines.append(
                f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{MARKER_RADIUS}" '
                'fill="black" class="disk"/>'
            )
        else:
            lines.append(
                f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{MARKER_RADIUS}" '
                'fill="white" stroke="black" stroke-width="1.5" class="circle"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def read_metadata(svg_text: str) -> dict:
    """Parse the JSON block out of the metadata element."""
    start = svg_text.index("<metadata id='analysis'>") + len("<metadata id='analysis'>")
    end = svg_text.index("</metadata>", start)
    return json.loads(svg_text[start:end])
