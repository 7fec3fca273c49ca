"""Deterministic CSV tables and SVG figures."""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..exactgeom import HPolyhedron
from ..cutkosky.region import GammaRegion


def format_value(x) -> str:
    """Rationals as p/q, integers as is, reals with 12 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return "%.12g" % float(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to write: the grid is empty")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        if len(r) != len(header):
            raise ValueError("row length does not match the header")
        w.writerow([format_value(x) for x in r])
    return buf.getvalue()


def emit_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    text = csv_text(header, rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- SVG ---------------------------------------------------------------------

W, H = 480, 440
MARGIN = 40
# barycentric (x1, x2, x3) -> canvas: x1 at bottom-left, x2 bottom-right, x3 top
_A = np.array([MARGIN, H - MARGIN], dtype=float)
_B = np.array([W - MARGIN, H - MARGIN], dtype=float)
_C = np.array([W / 2, H - MARGIN - (W - 2 * MARGIN) * np.sqrt(3) / 2], dtype=float)


def chart_to_canvas(pts, s: float = 1.0) -> np.ndarray:
    """(x2, x3) with x1 = s - x2 - x3 -> SVG pixel coordinates."""
    pts = np.asarray(pts, dtype=float) / s
    x2, x3 = pts[..., 0], pts[..., 1]
    x1 = 1 - x2 - x3
    return x1[..., None] * _A + x2[..., None] * _B + x3[..., None] * _C


def canvas_to_chart(pix, s: float = 1.0) -> np.ndarray:
    """Inverse of :func:`chart_to_canvas`."""
    M = np.column_stack([_B - _A, _C - _A])
    rel = np.asarray(pix, dtype=float) - _A
    return np.linalg.solve(M, rel.T).T * s


def _fmt(p) -> str:
    return f"{p[0]:.3f},{p[1]:.3f}"


def _path(pts) -> str:
    return " ".join(_fmt(p) for p in pts)


def _header(title: str, meta: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f"<title>{title}</title>",
        f"<desc>{meta}</desc>",
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]


def region_svg(region: GammaRegion, rays: int = 720) -> str:
    s = float(region.problem.s)
    c = ",".join(str(x) for x in region.problem.c)
    poly = region.boundary_polygon(rays)
    out = _header(f"Gamma({c})",
                  f"chart (x2,x3), x1=s-x2-x3, s={region.problem.s}; canvas = x1*A + x2*B + x3*C "
                  f"with A={_fmt(_A)} B={_fmt(_B)} C={_fmt(_C)}")
    if len(poly):
        out.append(f'<polygon id="gamma" points="{_path(chart_to_canvas(poly, s))}" '
                   'fill="#9ecae1" fill-opacity="0.8" stroke="none"/>')
    for k, piece in enumerate(region.conic_branch()):
        out.append(f'<polyline id="conic{k}" points="{_path(chart_to_canvas(piece, s))}" '
                   'fill="none" stroke="#d62728" stroke-width="1.5" stroke-dasharray="6,3"/>')
    tri = chart_to_canvas([[0, 0], [s, 0], [0, s]], s)
    out.append(f'<polygon id="simplex" points="{_path(tri)}" fill="none" stroke="black" stroke-width="1.5"/>')
    for p, lab, dx, dy in ((tri[0], "x1", -28, 16), (tri[1], "x2", 6, 16), (tri[2], "x3", -8, -8)):
        out.append(f'<text x="{p[0] + dx:.3f}" y="{p[1] + dy:.3f}" font-size="14" font-family="sans-serif">{lab}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _polygon_vertices(p: HPolyhedron) -> np.ndarray:
    verts = p.vertices()
    if not verts:
        return np.zeros((0, 2))
    pts = np.array([[float(x) for x in v] for v in verts])
    cen = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - cen[1], pts[:, 0] - cen[0])
    order = sorted(range(len(pts)), key=lambda i: (ang[i], pts[i, 0], pts[i, 1]))
    return pts[order]


def polygon_svg(pts: np.ndarray, title: str = "slice") -> str:
    pts = np.asarray(pts, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("SVG output needs 2D data")
    if len(pts) == 0:
        raise ValueError("nothing to draw: the region is empty")
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    lo = np.minimum(lo, 0)
    span = float(max(np.max(hi - lo), 1e-12))
    scale = (min(W, H) - 2 * MARGIN) / span

    def to_canvas(q):
        q = np.asarray(q, dtype=float)
        return np.column_stack([MARGIN + (q[:, 0] - lo[0]) * scale,
                                H - MARGIN - (q[:, 1] - lo[1]) * scale])

    out = _header(title, f"canvas = ({MARGIN} + (u - {lo[0]:.6g})*{scale:.6g}, "
                         f"{H - MARGIN} - (v - {lo[1]:.6g})*{scale:.6g})")
    axes = to_canvas([[lo[0], 0], [lo[0] + span, 0], [0, lo[1]], [0, lo[1] + span]])
    out.append(f'<line x1="{axes[0][0]:.3f}" y1="{axes[0][1]:.3f}" x2="{axes[1][0]:.3f}" '
               f'y2="{axes[1][1]:.3f}" stroke="#888" stroke-width="1"/>')
    out.append(f'<line x1="{axes[2][0]:.3f}" y1="{axes[2][1]:.3f}" x2="{axes[3][0]:.3f}" '
               f'y2="{axes[3][1]:.3f}" stroke="#888" stroke-width="1"/>')
    out.append(f'<polygon id="slice" points="{_path(to_canvas(pts))}" fill="#9ecae1" '
               'fill-opacity="0.8" stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_text(obj, title: str = "") -> str:
    """SVG for a Gamma region, a bounded 2D H-polyhedron, or an (k, 2) point array."""
    if isinstance(obj, GammaRegion):
        return region_svg(obj)
    if isinstance(obj, HPolyhedron):
        if obj.dim != 2:
            raise ValueError(f"SVG output needs 2D data, got a polyhedron in R^{obj.dim}")
        if not obj.is_bounded:
            raise ValueError("cannot draw an unbounded polyhedron")
        return polygon_svg(_polygon_vertices(obj), title or "slice")
    return polygon_svg(np.asarray(obj, dtype=float), title or "slice")


def emit_svg(path: str, obj, title: str = "") -> None:
    text = svg_text(obj, title)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_svg_polygon(text: str, element_id: str) -> np.ndarray:
    """Pixel coordinates of the polygon/polyline with the given id."""
    import xml.etree.ElementTree as ET
    root = ET.fromstring(text)
    for el in root.iter():
        if el.get("id") == element_id:
            pts = [tuple(map(float, p.split(","))) for p in el.get("points").split()]
            return np.array(pts)
    raise KeyError(element_id)
