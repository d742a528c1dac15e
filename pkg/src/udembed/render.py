"""Deterministic SVG drawings of (candidate) unit-distance embeddings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .embed import Embedding


@dataclass(frozen=True)
class Style:
    size: int = 480
    margin: int = 40
    node_radius: float = 9.0
    edge_tol: float = 1e-9
    font_size: int = 11


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(emb: Embedding, style: Style = Style(), title: str | None = None) -> str:
    """Vertices as labelled circles, edges as segments. Edges off unit
    length by more than ``style.edge_tol`` are dashed and annotated with
    their length."""
    g = emb.graph
    X = np.asarray(emb.coords, dtype=float)
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = max(float((hi - lo).max()), 1e-9)
    scale = (style.size - 2 * style.margin) / span
    ox = style.margin + 0.5 * ((style.size - 2 * style.margin) - scale * (hi[0] - lo[0]))
    oy = style.margin + 0.5 * ((style.size - 2 * style.margin) - scale * (hi[1] - lo[1]))

    def pt(i):
        x = ox + scale * (X[i, 0] - lo[0])
        y = style.size - (oy + scale * (X[i, 1] - lo[1]))  # y up
        return x, y

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.size}" height="{style.size}" '
        f'viewBox="0 0 {style.size} {style.size}">',
    ]
    name = title if title is not None else g.name
    if name:
        out.append(f"<title>{escape(name)}</title>")
    out.append('<g class="edges" stroke="black" stroke-width="1.5">')
    for u, v in g.edges:
        (x1, y1), (x2, y2) = pt(u), pt(v)
        length = math.dist(X[u], X[v])
        ident = f"{escape(g.labels[u])}-{escape(g.labels[v])}"
        if abs(length - 1.0) <= style.edge_tol:
            out.append(f'<line class="unit" data-edge="{ident}" x1="{_num(x1)}" y1="{_num(y1)}" '
                       f'x2="{_num(x2)}" y2="{_num(y2)}"/>')
        else:
            out.append(f'<line class="off" data-edge="{ident}" x1="{_num(x1)}" y1="{_num(y1)}" '
                       f'x2="{_num(x2)}" y2="{_num(y2)}" stroke="red" stroke-dasharray="4 3"/>')
            out.append(f'<text class="length" x="{_num((x1 + x2) / 2)}" y="{_num((y1 + y2) / 2 - 4)}" '
                       f'font-size="{style.font_size}" fill="red" text-anchor="middle">'
                       f"|{ident}| = {length:.6f}</text>")
    out.append("</g>")
    out.append('<g class="nodes">')
    for i, lab in enumerate(g.labels):
        x, y = pt(i)
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(style.node_radius)}" '
                   f'fill="white" stroke="black"/>')
        out.append(f'<text x="{_num(x)}" y="{_num(y + style.font_size / 3)}" font-size="{style.font_size}" '
                   f'text-anchor="middle">{escape(lab)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
