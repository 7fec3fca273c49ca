"""Integer points of bounded polytopes.

Enumeration walks the coordinates in order.  For every prefix the feasible
interval of the next coordinate is read off the exact projection of the
polytope onto the leading coordinates, so no candidate outside the polytope's
shadow is ever generated.
"""
from __future__ import annotations

from fractions import Fraction

from .polyhedron import HPolyhedron, UnboundedError
from .rational import integer_row


def _shadows(p: HPolyhedron):
    """Integer-scaled inequality systems of the projections onto x_0..x_k."""
    out = []
    for k in range(1, p.dim + 1):
        q = p if k == p.dim else p.project(range(k))
        out.append([integer_row(tuple(a) + (b,)) for a, b in q.inequalities])
    return out


def _interval(rows, prefix):
    """Integer range of the next coordinate given integer ``prefix``."""
    k = len(prefix)
    lo, hi = None, None
    for r in rows:
        c = r[k]
        rest = r[-1] - sum(x * y for x, y in zip(r[:k], prefix))
        if c > 0:
            b = -((-rest) // c)  # ceil(rest / c)
            lo = b if lo is None else max(lo, b)
        elif c < 0:
            b = rest // c  # floor(rest / c); Python floors for either sign
            hi = b if hi is None else min(hi, b)
        elif rest > 0:
            return 1, 0
    return lo, hi


def _check(p: HPolyhedron):
    if p.is_empty:
        return False
    if not p.is_bounded:
        raise UnboundedError("lattice points of an unbounded polyhedron")
    return True


def lattice_points(p: HPolyhedron) -> list[tuple]:
    """All integer points of ``p`` in lexicographic order."""
    if not _check(p):
        return []
    shadows = _shadows(p)
    out = []

    def walk(prefix):
        lo, hi = _interval(shadows[len(prefix)], prefix)
        if lo is None or hi is None:
            raise UnboundedError("unbounded coordinate during enumeration")
        for t in range(lo, hi + 1):
            q = prefix + [t]
            if len(q) == p.dim:
                out.append(tuple(Fraction(x) for x in q))
            else:
                walk(q)

    walk([])
    return out


def count_lattice_points(p: HPolyhedron) -> int:
    """Number of integer points, counting the last coordinate by interval length."""
    if not _check(p):
        return 0
    shadows = _shadows(p)
    n = p.dim

    def walk(prefix) -> int:
        lo, hi = _interval(shadows[len(prefix)], prefix)
        if lo is None or hi is None:
            raise UnboundedError("unbounded coordinate during enumeration")
        if hi < lo:
            return 0
        if len(prefix) == n - 1:
            return hi - lo + 1
        return sum(walk(prefix + [t]) for t in range(lo, hi + 1))

    return walk([])
