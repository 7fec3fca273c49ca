"""Three independent evaluations of vol_X(A) for the Cutkosky four-fold.

vol_X(A) = 12 * integral over Gamma(c) of Q(T(x)) d x_2 d x_3, the factor
4!/2 coming from h^0 = L^2 / 2 and the m^4/4! normalisation of the volume.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate as spi

from ..exactgeom.rational import qvec
from .problem import CutkoskyProblem, Q_MATRIX

NORMALIZATION = 12  # 4! / 2

LD = np.longdouble


class ToleranceNotReached(RuntimeError):
    """Adaptive integration ran out of cells; carries the best estimate."""

    def __init__(self, msg, estimate, error):
        super().__init__(msg)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class AdaptiveResult:
    value: float
    error: float
    levels: int
    cells: int
    boundary_cells: int

    def __float__(self):
        return float(self.value)


def _problem(c, s) -> CutkoskyProblem:
    return c if isinstance(c, CutkoskyProblem) else CutkoskyProblem(tuple(c), s)


def simplex_integral_exact(c, s=1) -> Fraction:
    """12 * integral of Q(T(x)) over the whole s-simplex, exactly.

    In barycentric coordinates T = sum_i lam_i t_i with t_i the image of the
    i-th vertex, so the integral is A/12 * (sum_ij B(t_i, t_j) + sum_i B(t_i, t_i))
    with A = s^2/2 and B the bilinear form of Q.
    """
    p = _problem(c, s)
    c, s = p.c, p.s
    ts = [
        (c[0] + s, c[1] + s, c[2] + s),
        (c[0] - s, c[1], c[2]),
        (c[0], c[1] - s, c[2]),
    ]

    def bil(u, v):
        return sum(int(Q_MATRIX[i][j]) * u[i] * v[j] for i in range(3) for j in range(3))

    area = s * s / 2
    tot = sum(bil(ti, tj) for ti in ts for tj in ts) + sum(bil(ti, ti) for ti in ts)
    return NORMALIZATION * area / 12 * tot


def full_simplex_is_ample(c, s=1) -> bool:
    """Exact certificate that every point of the simplex maps into the ample cone."""
    p = _problem(c, s)
    s_ = p.s
    verts = [(Fraction(0), Fraction(0)), (s_, Fraction(0)), (Fraction(0), s_)]
    edges = ((0, 1), (1, 2), (0, 2))
    mids = [((verts[i][0] + verts[j][0]) / 2, (verts[i][1] + verts[j][1]) / 2) for i, j in edges]

    def q(pt):
        t = p.t_coords(*pt)
        return 2 * (t[0] * t[1] + t[0] * t[2] + t[1] * t[2])

    qv = [q(v) for v in verts]
    bern = qv + [2 * q(m) - (qv[i] + qv[j]) / 2 for m, (i, j) in zip(mids, edges)]
    svals = [sum(p.t_coords(*v)) for v in verts]
    return min(bern) > 0 and min(svals) > 0


def _cell_values(p: CutkoskyProblem, v0, v1, v2):
    m01, m12, m02 = (v0 + v1) / 2, (v1 + v2) / 2, (v0 + v2) / 2
    q = lambda pt: p.q_at(pt[:, 0], pt[:, 1])
    q0, q1, q2 = q(v0), q(v1), q(v2)
    qa, qb, qc = q(m01), q(m12), q(m02)
    bern = np.stack([q0, q1, q2,
                     2 * qa - (q0 + q1) / 2,
                     2 * qb - (q1 + q2) / 2,
                     2 * qc - (q0 + q2) / 2])
    sv = np.stack([p.s_at(v[:, 0], v[:, 1]) for v in (v0, v1, v2)])
    return bern, sv, (qa, qb, qc), (m01, m12, m02)


def vol_adaptive(c, tol: float = 1e-6, s=1, integrand: str = "q",
                 max_cells: int = 4_000_000, max_levels: int = 40) -> AdaptiveResult:
    """Adaptive simplex-subdivision integral of Q(T) (or of 1, for the area).

    Each level classifies the live triangles with a Bernstein enclosure of the
    quadratic Q(T) and the vertex values of the linear form x + y + z:
    fully ample cells are integrated exactly (edge-midpoint rule), cells with
    no ample point are dropped, and the rest are split into four by their edge
    midpoints until the total bound on their contribution is below tol/2.
    Arithmetic runs in 80-bit long double.  ``integrand='one'`` gives the area
    of the region (without the factor 12).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = _problem(c, s)
    sd = LD(float(p.s.numerator)) / LD(p.s.denominator)
    zero = LD(0)
    v0 = np.array([[zero, zero]], dtype=LD)
    v1 = np.array([[sd, zero]], dtype=LD)
    v2 = np.array([[zero, sd]], dtype=LD)
    scale = LD(NORMALIZATION) if integrand == "q" else LD(1)
    if integrand not in ("q", "one"):
        raise ValueError("integrand must be 'q' or 'one'")
    inside_parts = []
    area = sd * sd / 2
    cells = 0
    eps = LD(64) * np.finfo(LD).eps
    for level in range(max_levels + 1):
        n = len(v0)
        cells += n
        bern, sv, qmid, mid = _cell_values(p, v0, v1, v2)
        mag = np.max(np.abs(bern), axis=0) * eps
        bmin = np.min(bern, axis=0) - mag
        bmax = np.max(bern, axis=0) + mag
        smin = np.min(sv, axis=0) - eps * np.max(np.abs(sv), axis=0)
        smax = np.max(sv, axis=0)
        inside = (bmin > 0) & (smin > 0)
        outside = (bmax <= 0) | (smax <= 0)
        boundary = ~(inside | outside)
        if integrand == "q":
            contrib = area * (qmid[0] + qmid[1] + qmid[2]) / 3
        else:
            contrib = np.full(n, area, dtype=LD)
        inside_parts.append(np.sum(contrib[inside]))
        if integrand == "q":
            bound = area * np.maximum(bmax[boundary], 0)
        else:
            bound = np.full(int(np.count_nonzero(boundary)), area, dtype=LD)
        total_bound = scale * np.sum(bound)
        nb = int(np.count_nonzero(boundary))
        if total_bound < tol / 2 or nb == 0:
            # boundary cells: edge-midpoint rule on the clipped integrand
            pts = [m[boundary] for m in mid]
            est = LD(0)
            for pt, qv in zip(pts, (q[boundary] for q in qmid)):
                keep = p.in_gamma(pt[:, 0], pt[:, 1], strict=True)
                if integrand == "q":
                    est += np.sum(np.where(keep, qv, 0)) * area / 3
                else:
                    est += np.count_nonzero(keep) * area / 3
            value = scale * (sum(inside_parts, LD(0)) + est)
            return AdaptiveResult(value, float(total_bound), level, cells, nb)
        if cells + 4 * nb > max_cells:
            est = scale * (sum(inside_parts, LD(0)) + np.sum(bound) / 2)
            raise ToleranceNotReached(
                f"cell budget {max_cells} exhausted at level {level} (bound {float(total_bound):.3g})",
                float(est), float(total_bound))
        a, b, cc = v0[boundary], v1[boundary], v2[boundary]
        ab, bc, ac = (a + b) / 2, (b + cc) / 2, (a + cc) / 2
        v0 = np.concatenate([a, ab, ac, ab])
        v1 = np.concatenate([ab, b, bc, bc])
        v2 = np.concatenate([ac, bc, cc, ac])
        area = area / 4
    raise ToleranceNotReached("level limit reached", float(scale * sum(inside_parts, LD(0))), float("inf"))


def region_area(c, tol: float = 1e-5, s=1) -> AdaptiveResult:
    """Area of Gamma(c) in the (x_2, x_3) chart."""
    return vol_adaptive(c, tol=tol, s=s, integrand="one")


def vol_mc(c, samples: int = 10**6, seed: int = 0, s=1, chunk: int = 10**6):
    """Uniform sampling on the simplex; returns (estimate, stderr or None)."""
    if samples < 1:
        raise ValueError("samples must be positive")
    p = _problem(c, s)
    sd = float(p.s)
    area = sd * sd / 2
    rng = np.random.default_rng(seed)
    tot = 0.0
    tot2 = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        u = rng.random((m, 2))
        flip = u.sum(axis=1) > 1
        u[flip] = 1 - u[flip]
        x2, x3 = u[:, 0] * sd, u[:, 1] * sd
        q = np.asarray(p.q_at(x2, x3, np.float64), dtype=np.float64)
        keep = p.in_gamma(x2, x3, strict=True)
        vals = np.where(keep, q, 0.0) * (NORMALIZATION * area)
        tot += float(np.sum(vals))
        tot2 += float(np.sum(vals * vals))
        done += m
    mean = tot / samples
    if samples < 2:
        return mean, None
    var = (tot2 - samples * mean * mean) / (samples - 1)
    return mean, float(np.sqrt(max(var, 0.0) / samples))


def vol_lattice_sum(c, m: int, s: int = 1) -> Fraction:
    """(4!/(2 m^4)) * sum over a_1 + a_2 + a_3 = s m of (L_a)^2 over ample L_a,
    L_a = m L' + a_1 H_1 + a_2 H_2 + a_3 H_3, computed exactly."""
    if m < 1:
        raise ValueError("m must be positive")
    c = qvec(c)
    s = int(s)
    den = 1
    for x in c:
        den = den * x.denominator // np.gcd(den, x.denominator)
    cm = [int(x * m * den) for x in c]  # den * m * c_i, integral
    total_m = s * m
    a1 = np.repeat(np.arange(total_m + 1), np.arange(total_m + 1, 0, -1))
    a2 = np.concatenate([np.arange(total_m - k + 1) for k in range(total_m + 1)])
    a3 = total_m - a1 - a2
    big = max(abs(v) for v in cm) + 2 * den * total_m
    dtype = np.int64 if big < 2**28 else object
    a1, a2, a3 = (x.astype(dtype) for x in (a1, a2, a3))
    X = cm[0] + den * (a1 - a2)
    Y = cm[1] + den * (a1 - a3)
    Z = cm[2] + den * a1
    q = 2 * (X * Y + X * Z + Y * Z)
    ample = (q > 0) & ((X + Y + Z) > 0)
    tot = int(np.sum(q[ample], dtype=dtype)) if np.any(ample) else 0
    return Fraction(24 * tot, 2 * m ** 4 * den * den)


def richardson(values: Sequence[tuple[int, Fraction]]) -> Fraction:
    """Extrapolate V(m) = V + A_1/m + ... + A_{k-1}/m^{k-1} from k samples exactly."""
    from ..exactgeom.rational import solve
    rows = [[Fraction(1)] + [Fraction(1, m ** j) for j in range(1, len(values))] for m, _ in values]
    return solve(rows, [v for _, v in values])[0]


def vol_lattice_extrapolated(c, ms: Sequence[int] = (100, 200, 400), s: int = 1):
    """Richardson-extrapolated lattice sums; returns (value, [(m, V(m)), ...])."""
    seq = [(m, vol_lattice_sum(c, m, s)) for m in ms]
    return richardson(seq), seq


def vol_sections(c, s=1, epsabs: float = 1e-13, epsrel: float = 1e-12) -> float:
    """Integrate each line x_3 = const in closed form and the result by quadrature.

    On such a line Q(T) is a quadratic in x_2 and x + y + z is linear, so the
    ample part of the chord is a union of intervals with explicit endpoints.
    """
    p = _problem(c, s)
    sd = float(p.s)
    c1, c2, c3 = (float(x) for x in p.c)
    d = (-2.0, -1.0, -1.0)

    def section(x3):
        pv = (c1 + sd - x3, c2 + sd - 2 * x3, c3 + sd - x3)
        al = 2 * (d[0] * d[1] + d[0] * d[2] + d[1] * d[2])
        be = 2 * (pv[0] * d[1] + pv[1] * d[0] + pv[0] * d[2] + pv[2] * d[0]
                  + pv[1] * d[2] + pv[2] * d[1])
        ga = 2 * (pv[0] * pv[1] + pv[0] * pv[2] + pv[1] * pv[2])
        lo, hi = 0.0, sd - x3
        hi = min(hi, sum(pv) / 4)  # x + y + z = sum(pv) - 4 x_2 > 0
        if hi <= lo:
            return 0.0
        cuts = [lo, hi]
        disc = be * be - 4 * al * ga
        if disc > 0:
            r = np.sqrt(disc)
            for root in ((-be - r) / (2 * al), (-be + r) / (2 * al)):
                if lo < root < hi:
                    cuts.append(root)
        cuts.sort()
        F = lambda t: al * t ** 3 / 3 + be * t * t / 2 + ga * t
        out = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            mid = (a + b) / 2
            if al * mid * mid + be * mid + ga > 0:
                out += F(b) - F(a)
        return out

    # breakpoints where the chord structure changes help quad
    xs = np.linspace(0, sd, 2001)
    vals = np.array([section(x) for x in xs])
    pts = [float(xs[i]) for i in range(1, len(xs) - 1)
           if (vals[i] > 0) != (vals[i - 1] > 0)]
    res, _ = spi.quad(section, 0, sd, points=pts or None, limit=500,
                      epsabs=epsabs, epsrel=epsrel)
    return NORMALIZATION * res
