"""Intersection form, nef cone and the change of coordinates for the
projective bundle X = P(O(H_1) + O(H_2) + O(H_3)) over E x E.

Classes are written x f_1 + y f_2 + z Delta.  All pairwise intersections of
f_1, f_2, Delta are 1 and their squares vanish, so (x, y, z)^2 = 2(xy + xz + yz).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from ..exactgeom.rational import qvec, rat

# H_1 = f_1 + f_2 + Delta, H_2 = -f_1, H_3 = -f_2
H_CLASSES = ((1, 1, 1), (-1, 0, 0), (0, -1, 0))

# x f_1 + y f_2 + z Delta  ->  quadratic form matrix (Q(t) = t^T M t)
Q_MATRIX = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


class NSClass(NamedTuple):
    x: object
    y: object
    z: object


def q_form(t) -> object:
    """Self-intersection 2(xy + xz + yz); exact on rationals, vectorised on arrays."""
    x, y, z = t
    return 2 * (x * y + x * z + y * z)


def nef_contains(t, strict: bool = False):
    """xy + xz + yz >= 0 and x + y + z >= 0 (both strict for ample)."""
    x, y, z = t
    q = x * y + x * z + y * z
    s = x + y + z
    if strict:
        return (q > 0) & (s > 0)
    return (q >= 0) & (s >= 0)


def transform_T(x: Sequence, c: Sequence, s=1) -> NSClass:
    """T(x; c) = (c_1 + x_1 - x_2, c_2 + x_1 - x_3, c_3 + x_1) for x in s * simplex."""
    xs = qvec(x)
    s = rat(s)
    if len(xs) != 3 or any(t < 0 for t in xs) or sum(xs) != s:
        raise ValueError(f"{tuple(map(str, xs))} is not in the simplex x_1 + x_2 + x_3 = {s}")
    c = qvec(c)
    return NSClass(c[0] + xs[0] - xs[1], c[1] + xs[0] - xs[2], c[2] + xs[0])


def class_of(a: Sequence, c: Sequence) -> NSClass:
    """L' + a_1 H_1 + a_2 H_2 + a_3 H_3 with L' = c_1 f_1 + c_2 f_2 + c_3 Delta."""
    out = list(qvec(c))
    for ai, h in zip(qvec(a), H_CLASSES):
        for i in range(3):
            out[i] += ai * h[i]
    return NSClass(*out)


@dataclass(frozen=True)
class CutkoskyProblem:
    """A = O_{P(V)}(s) (x) pi^* O(L'), L' = c_1 f_1 + c_2 f_2 + c_3 Delta."""

    c: tuple
    s: Fraction = Fraction(1)

    def __post_init__(self):
        c = qvec(self.c)
        if len(c) != 3 or any(x < 0 for x in c):
            raise ValueError("c must be three non-negative rationals")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", rat(self.s))
        if self.s <= 0:
            raise ValueError("s must be positive")

    # (x_2, x_3) plane coordinates; x_1 = s - x_2 - x_3
    def t_coords(self, x2, x3):
        x1 = self.s - x2 - x3
        c1, c2, c3 = self.c
        return (c1 + x1 - x2, c2 + x1 - x3, c3 + x1)

    def t_coords_float(self, x2, x3, dtype=np.longdouble):
        c = [dtype(float(ci.numerator)) / dtype(ci.denominator) for ci in self.c]
        s = dtype(float(self.s.numerator)) / dtype(self.s.denominator)
        x1 = s - x2 - x3
        return (c[0] + x1 - x2, c[1] + x1 - x3, c[2] + x1)

    def q_at(self, x2, x3, dtype=np.longdouble):
        return q_form(self.t_coords_float(x2, x3, dtype))

    def s_at(self, x2, x3, dtype=np.longdouble):
        t = self.t_coords_float(x2, x3, dtype)
        return t[0] + t[1] + t[2]

    def in_gamma(self, x2, x3, strict: bool = True):
        """Membership of (s - x2 - x3, x2, x3) in the region (ample when strict)."""
        t = self.t_coords_float(np.asarray(x2, dtype=np.longdouble),
                                np.asarray(x3, dtype=np.longdouble))
        inside_simplex = (np.asarray(x2) >= 0) & (np.asarray(x3) >= 0) & (
            np.asarray(x2) + np.asarray(x3) <= float(self.s))
        return nef_contains(t, strict) & inside_simplex

    def in_gamma_exact(self, x2, x3, strict: bool = True) -> bool:
        x2, x3 = rat(x2), rat(x3)
        if x2 < 0 or x3 < 0 or x2 + x3 > self.s:
            return False
        return bool(nef_contains(self.t_coords(x2, x3), strict))
