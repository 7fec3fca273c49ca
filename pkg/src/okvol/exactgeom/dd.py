"""Incremental double description over the rationals.

The core routine works on homogeneous cones ``{y : A y >= 0}`` and returns a
minimal generating system made of extreme rays plus a basis of the lineality
space.  Adjacency of rays is decided combinatorially (zero-set inclusion),
which is exact for minimal systems and needs no degeneracy handling.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .rational import dot, primitive, rat


def cone_generators(rows: Sequence[Sequence], dim: int):
    """Generators of the cone ``{y in Q^dim : r . y >= 0 for r in rows}``.

    Returns ``(rays, lines)``; both are lists of primitive integer vectors
    (as Fraction tuples).  ``lines`` spans the lineality space and ``rays``
    are extreme rays of the pointed part, taken modulo the lines.
    """
    rows = [tuple(rat(x) for x in r) for r in rows]
    for r in rows:
        if len(r) != dim:
            raise ValueError("row length does not match dimension")

    lines = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    rays: list[tuple] = []
    zeros: list[int] = []  # bitmask of processed rows on which each ray is tight

    for k, a in enumerate(rows):
        bit = 1 << k
        vals = [dot(a, l) for l in lines]
        piv = next((i for i, v in enumerate(vals) if v != 0), None)
        if piv is not None:
            l0 = lines[piv]
            s0 = vals[piv]
            if s0 < 0:
                l0 = tuple(-x for x in l0)
                s0 = -s0
            new_lines = []
            for i, l in enumerate(lines):
                if i == piv:
                    continue
                if vals[i] != 0:
                    t = vals[i] / s0
                    l = tuple(x - t * y for x, y in zip(l, l0))
                new_lines.append(primitive(l))
            new_rays = []
            for r in rays:
                t = dot(a, r) / s0
                if t != 0:
                    r = primitive(tuple(x - t * y for x, y in zip(r, l0)))
                new_rays.append(r)
            lines = new_lines
            rays = new_rays + [primitive(l0)]
            # projected rays are tight on row k; the new ray is strictly positive
            zeros = [z | bit for z in zeros] + [_zero_mask(rows[:k], l0)]
            continue

        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            zeros = [z | (bit if vals[i] == 0 else 0) for i, z in enumerate(zeros)]
            continue

        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        for ip in pos:
            for ineg in neg:
                common = zeros[ip] & zeros[ineg]
                if not _adjacent(common, ip, ineg, zeros):
                    continue
                p, q = rays[ip], rays[ineg]
                vp, vq = vals[ip], -vals[ineg]
                r = primitive(tuple(vq * x + vp * y for x, y in zip(p, q)))
                new_rays.append(r)
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros

    return rays, lines


def _zero_mask(rows, v) -> int:
    mask = 0
    for k, a in enumerate(rows):
        if dot(a, v) == 0:
            mask |= 1 << k
    return mask


def _adjacent(common: int, i: int, j: int, zeros: list[int]) -> bool:
    for k, z in enumerate(zeros):
        if k != i and k != j and (z & common) == common:
            return False
    return True
