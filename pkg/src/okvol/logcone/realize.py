"""End-to-end realisation: a log-concave f becomes the volume function of a
subseries of a complete toric multigraded series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np
from mpmath import mp

from ..exactgeom.rational import integer_row
from ..okounkov import OkounkovCone, SeriesSpec, okounkov_cone, support
from .ballcone import BallCone, ScaledCone, ShrinkError, build_ball_cone, shrink_into
from .functions import DPS, HomogFn, to_ctx


@dataclass(frozen=True)
class Realization:
    f: HomogFn
    series: SeriesSpec
    target: OkounkovCone
    ball: BallCone
    lam: Fraction
    cone: ScaledCone
    cfactor: Fraction  # slice volumes equal cfactor * f

    @property
    def n(self) -> int:
        return self.ball.n

    def volfn(self, m: Sequence):
        """vol_W(m) = n! * cfactor * f(m)."""
        with mp.workdps(DPS):
            return factorial(self.n) * to_ctx(self.cfactor) * self.f(m)

    def fiber_dimension(self, m: Sequence[int]) -> int:
        """dim W_m: lattice x with (x, m) in the squeezed cone and in the parent cone."""
        m = tuple(int(t) for t in m)
        base = self.ball
        lam = float(self.lam)
        r = float(base.radius(m)) * lam
        if r <= 0:
            return 0
        g = float(base.center(m)[0]) * lam
        axis = np.arange(int(np.floor(g - r)), int(np.ceil(g + r)) + 1)
        grid = np.stack(np.meshgrid(*([axis] * self.n), indexing="ij"), -1).reshape(-1, self.n)
        inside = (np.sum((grid - g) ** 2, axis=1) < r * r) & np.all(grid > 0, axis=1)
        rows = np.array([integer_row(tuple(a) + (b,)) for a, b in self.target.cone.inequalities],
                        dtype=np.int64)
        full = np.hstack([grid, np.tile(np.array(m, dtype=np.int64), (len(grid), 1))])
        inside &= np.all(full @ rows[:, :-1].T >= rows[:, -1], axis=1)
        return int(np.count_nonzero(inside))

    def direct_vol_estimate(self, m: Sequence[int], k: int) -> Fraction:
        return Fraction(self.fiber_dimension([k * int(t) for t in m]) * factorial(self.n), k ** self.n)


def realize(f: HomogFn, series: SeriesSpec, seed: int = 0, **ball_kw) -> Realization:
    """Build the ball cone of ``f`` and squeeze it into the Okounkov cone of ``series``.

    The domain K of f is identified with multidegree space through the basis
    H_1..H_rho; K must lie in the support of the complete series.
    """
    if f.degree != series.n:
        raise ShrinkError(f"f has degree {f.degree} but the variety has dimension {series.n}")
    if f.p != series.rho:
        raise ShrinkError(f"f lives on R^{f.p} but the series has rho = {series.rho}")
    target = okounkov_cone(series)
    supp = support(target)
    outside = [r for r in f.domain.to_v().rays if not supp.contains(r)]
    if outside:
        raise ShrinkError("domain of f is not inside the support of the series: "
                          + ", ".join(str(tuple(map(str, r))) for r in outside))
    ball = build_ball_cone(f, seed=seed, **ball_kw)
    lam, cone, cfactor = shrink_into(ball, target, seed=seed)
    return Realization(f, series, target, ball, lam, cone, cfactor)
