"""Small exact-rational helpers shared by the polyhedral code.

Rationals are :class:`fractions.Fraction`; vectors are plain tuples of
Fractions.  Nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

QVec = tuple  # tuple[Fraction, ...]


def rat(x) -> Fraction:
    """Coerce ints, Fractions, decimal strings or ``"p/q"`` strings to Fraction.

    Floats are accepted and converted exactly (binary value), which is what the
    sampling code wants when it checks float points against exact polyhedra.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    # numpy scalars and the like
    try:
        return Fraction(int(x)) if int(x) == x else Fraction(float(x))
    except (TypeError, ValueError):
        raise TypeError(f"cannot interpret {x!r} as a rational") from None


def qvec(xs: Iterable) -> QVec:
    return tuple(rat(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a: Sequence, b: Sequence) -> QVec:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> QVec:
    return tuple(x + y for x, y in zip(a, b))


def scale(t, a: Sequence) -> QVec:
    return tuple(t * x for x in a)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def primitive(v: Sequence) -> QVec:
    """Positive multiple of ``v`` with coprime integer entries (zero stays zero)."""
    v = [rat(x) for x in v]
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(Fraction(0) for _ in v)
    return tuple(Fraction(x // g) for x in ints)


def integer_row(v: Sequence) -> tuple[int, ...]:
    """Like :func:`primitive` but returns Python ints."""
    return tuple(int(x) for x in primitive(v))


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by Gaussian elimination over Q."""
    m = [list(map(rat, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        r += 1
        if r == len(m):
            break
    return r


def det(mat: Sequence[Sequence]) -> Fraction:
    """Exact determinant (Bareiss-free plain elimination; matrices are tiny)."""
    m = [list(map(rat, r)) for r in mat]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out


def solve(mat: Sequence[Sequence], rhs: Sequence) -> QVec:
    """Solve a square non-singular system exactly."""
    n = len(mat)
    m = [list(map(rat, r)) + [rat(b)] for r, b in zip(mat, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return tuple(r[n] for r in m)


def inverse(mat: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(mat)
    cols = [solve(mat, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def format_rat(x: Fraction) -> str:
    return str(rat(x))
