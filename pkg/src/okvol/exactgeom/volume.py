"""Exact Lebesgue volume of bounded rational polytopes.

Each face is coned from its vertex centroid over the recursively
triangulated facets, so every piece is a simplex with rational vertices.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .polyhedron import HPolyhedron, UnboundedError
from .rational import det, dot, rank


def _affine_rank(points) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([tuple(x - y for x, y in zip(p, p0)) for p in points[1:]])


def triangulate(p: HPolyhedron) -> list[tuple]:
    """Full-dimensional simplices (as vertex tuples) covering ``p`` without overlap.

    Returns an empty list when ``p`` is empty or lower-dimensional.
    """
    if p.is_empty:
        return []
    v = p.to_v()
    if not v.is_bounded:
        raise UnboundedError("triangulation needs a bounded polytope")
    verts = list(v.vertices)
    n = p.dim
    if _affine_rank(verts) < n:
        return []
    tight = [
        frozenset(i for i, x in enumerate(verts) if dot(a, x) == b)
        for a, b in p.inequalities
    ]
    memo: dict = {}

    def faces_below(face: frozenset, k: int) -> list[frozenset]:
        out = []
        for t in tight:
            g = face & t
            if g == face or g in out or len(g) < k:
                continue
            if _affine_rank([verts[i] for i in sorted(g)]) == k - 1:
                out.append(g)
        return out

    def tri(face: frozenset, k: int) -> list[tuple]:
        if (face, k) in memo:
            return memo[face, k]
        pts = [verts[i] for i in sorted(face)]
        if k == 0:
            res = [(pts[0],)]
        elif len(pts) == k + 1:
            res = [tuple(pts)]
        else:
            c = tuple(sum(col, Fraction(0)) / len(pts) for col in zip(*pts))
            res = [(c,) + s for g in faces_below(face, k) for s in tri(g, k - 1)]
        memo[face, k] = res
        return res

    return tri(frozenset(range(len(verts))), n)


def simplex_volume(simplex) -> Fraction:
    p0 = simplex[0]
    rows = [tuple(x - y for x, y in zip(q, p0)) for q in simplex[1:]]
    return abs(det(rows)) / factorial(len(rows))


def volume(p: HPolyhedron) -> Fraction:
    """n-dimensional volume; zero for empty or lower-dimensional input."""
    if p.is_empty:
        return Fraction(0)
    if not p.is_bounded:
        raise UnboundedError("volume of an unbounded polyhedron")
    return sum((simplex_volume(s) for s in triangulate(p)), Fraction(0))
