"""The region Gamma(c) in the (x_2, x_3) chart of the simplex, with polygonal
approximations for plotting and area checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import CutkoskyProblem


@dataclass(frozen=True)
class GammaRegion:
    """{x in s * simplex : T(x; c) ample}, a convex set (preimage of a convex cone)."""

    problem: CutkoskyProblem

    @classmethod
    def of(cls, c, s=1) -> "GammaRegion":
        return cls(CutkoskyProblem(tuple(c), s))

    def contains(self, x2, x3, strict: bool = True):
        return self.problem.in_gamma(x2, x3, strict)

    def _coeffs(self, p0, d):
        """Q(T(p0 + t d)) = qa t^2 + qb t + qc and x+y+z = sa t + sb along a line."""
        p = self.problem
        t0 = np.array(p.t_coords_float(p0[0], p0[1], np.float64), dtype=float)
        t1 = np.array(p.t_coords_float(p0[0] + d[0], p0[1] + d[1], np.float64), dtype=float)
        dt = t1 - t0
        M = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=float)
        return dt @ M @ dt, 2 * (t0 @ M @ dt), t0 @ M @ t0, dt.sum(), t0.sum()

    def interior_point(self, grid: int = 200):
        """Centroid of the grid points inside; None when the region is empty."""
        s = float(self.problem.s)
        u = (np.arange(grid) + 0.5) / grid * s
        x2, x3 = np.meshgrid(u, u, indexing="ij")
        x2, x3 = x2.ravel(), x3.ravel()
        keep = (x2 + x3 < s) & self.contains(x2, x3)
        if not np.any(keep):
            return None
        return np.array([x2[keep].mean(), x3[keep].mean()])

    def boundary_polygon(self, rays: int = 720) -> np.ndarray:
        """Exit points of rays cast from an interior point, each solved in closed form.

        Convexity makes every ray leave the region exactly once, so the points
        in angular order form an inscribed polygon.
        """
        p0 = self.interior_point()
        if p0 is None:
            return np.zeros((0, 2))
        s = float(self.problem.s)
        out = []
        for th in np.arange(rays) * (2 * np.pi / rays):
            d = np.array([np.cos(th), np.sin(th)])
            ts = []
            # simplex walls x2 >= 0, x3 >= 0, x2 + x3 <= s
            for a, b in (((1, 0), 0.0), ((0, 1), 0.0), ((-1, -1), -s)):
                rate = a[0] * d[0] + a[1] * d[1]
                if rate < 0:
                    ts.append((b - (a[0] * p0[0] + a[1] * p0[1])) / rate)
            qa, qb, qc, sa, sb = self._coeffs(p0, d)
            if sa < 0:
                ts.append(-sb / sa)
            roots = np.roots([qa, qb, qc]) if abs(qa) > 1e-300 else (
                np.array([-qc / qb]) if qb != 0 else np.array([]))
            ts.extend(float(r.real) for r in roots if abs(r.imag) < 1e-12 and r.real > 0)
            out.append(p0 + min(ts) * d)
        # corners of the simplex inside the region are vertices of the polygon
        corners = np.array([[0.0, 0.0], [s, 0.0], [0.0, s]])
        keep = self.contains(corners[:, 0], corners[:, 1], strict=False)
        pts = np.vstack([np.array(out), corners[keep]])
        ang = np.arctan2(pts[:, 1] - p0[1], pts[:, 0] - p0[0])
        return pts[np.argsort(ang, kind="stable")]

    def area_polygon(self, rays: int = 720) -> float:
        return polygon_area(self.boundary_polygon(rays))

    def conic_branch(self, samples: int = 400) -> list[np.ndarray]:
        """Polylines of {Q(T) = 0, x + y + z >= 0} inside the simplex."""
        p = self.problem
        s = float(p.s)
        pieces, cur = [], []
        for x3 in np.linspace(0, s, samples):
            # Q along x2 at fixed x3: quadratic with leading coefficient 10
            x2s = np.array([0.0, 1.0, 2.0])
            qv = np.array([float(p.q_at(x, x3, np.float64)) for x in x2s])
            a = (qv[2] - 2 * qv[1] + qv[0]) / 2
            b = qv[1] - qv[0] - a
            disc = b * b - 4 * a * qv[0]
            pt = None
            if disc >= 0:
                for r in ((-b - np.sqrt(disc)) / (2 * a), (-b + np.sqrt(disc)) / (2 * a)):
                    if -1e-12 <= r <= s - x3 + 1e-12 and float(p.s_at(r, x3, np.float64)) >= 0:
                        pt = (r, x3)
                        break
            if pt is None:
                if len(cur) > 1:
                    pieces.append(np.array(cur))
                cur = []
            else:
                cur.append(pt)
        if len(cur) > 1:
            pieces.append(np.array(cur))
        return pieces


def polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2)


def points_in_polygon(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Even-odd rule, vectorised over the points."""
    inside = np.zeros(len(pts), dtype=bool)
    px, py = pts[:, 0], pts[:, 1]
    for (x0, y0), (x1, y1) in zip(poly, np.roll(poly, -1, axis=0)):
        crosses = (y0 > py) != (y1 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (px < xc)
    return inside
