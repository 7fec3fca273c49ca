"""Convex cones whose slices are balls of volume f(v), Monte Carlo slice
volumes, and shrinking such cones into a toric Okounkov cone."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from mpmath import mp

from ..exactgeom import HPolyhedron
from ..exactgeom.rational import dot, qvec, rat
from .functions import DPS, HomogFn, HypothesisError, interior_samples, to_ctx


class ShrinkError(ValueError):
    pass


@lru_cache(maxsize=None)
def unit_ball_volume(n: int):
    """C_n = pi^(n/2) / Gamma(n/2 + 1) to 50 significant digits."""
    with mp.workdps(DPS):
        return +(mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2 + 1))


@dataclass(frozen=True)
class BallCone:
    """C' = {(w, v) : w in int R_+^n, v in int K, |w - g(v)| < r(v)}.

    r(v) = (f(v) / C_n)^(1/n) and g(v) = k * (l(v), ..., l(v)).
    """

    f: HomogFn
    form: tuple
    k: object  # mpf

    @property
    def n(self) -> int:
        return self.f.degree

    @property
    def domain(self) -> HPolyhedron:
        return self.f.domain

    @property
    def rho(self) -> int:
        return self.f.p

    def l(self, v):
        return dot(self.form, qvec(v))

    def radius(self, v):
        with mp.workdps(DPS):
            fv = self.f(v)
            if fv <= 0:
                return mp.mpf(0)
            return mp.root(fv / unit_ball_volume(self.n), self.n)

    def center(self, v):
        with mp.workdps(DPS):
            c = self.k * to_ctx(self.l(v))
            return [c] * self.n

    def contains(self, w: Sequence, v: Sequence) -> bool:
        """Open membership test, evaluated at 50 digits."""
        v = qvec(v)
        if len(w) != self.n or len(v) != self.rho:
            raise ValueError("point does not fit the cone dimensions")
        if not self.domain.contains(v, strict=True):
            return False
        with mp.workdps(DPS):
            ww = [to_ctx(x) for x in w]
            if any(x <= 0 for x in ww):
                return False
            c = self.k * to_ctx(self.l(v))
            d2 = sum((x - c) ** 2 for x in ww)
            r = self.radius(v)
            return d2 < r * r

    def slice_volume(self, v):
        """Exact slice volume: the ball volume, which is f(v)."""
        return self.f(v)

    def bounding_box(self, v):
        r = float(self.radius(v))
        c = float(self.center(v)[0])
        return np.full(self.n, c - r), np.full(self.n, c + r)

    def _mc_hits(self, v, pts: np.ndarray) -> np.ndarray:
        c = float(self.center(v)[0])
        r = float(self.radius(v))
        return (np.sum((pts - c) ** 2, axis=1) < r * r) & np.all(pts > 0, axis=1)


@dataclass(frozen=True)
class ScaledCone:
    """{(lam * w, v) : (w, v) in base}: the base cone squeezed along R^n x {*}."""

    base: BallCone
    lam: Fraction

    @property
    def n(self):
        return self.base.n

    @property
    def rho(self):
        return self.base.rho

    def contains(self, w, v) -> bool:
        return self.base.contains([rat(x) / self.lam for x in w], v)

    def slice_volume(self, v):
        with mp.workdps(DPS):
            return to_ctx(self.lam) ** self.n * self.base.f(v)

    def bounding_box(self, v):
        lo, hi = self.base.bounding_box(v)
        return float(self.lam) * lo, float(self.lam) * hi

    def _mc_hits(self, v, pts):
        return self.base._mc_hits(v, pts / float(self.lam))


def default_form(domain: HPolyhedron) -> tuple:
    """sum v_i if K sits in the positive orthant, else the sum of facet normals."""
    rays = domain.to_v().rays
    if domain.to_v().lines:
        raise HypothesisError("domain cone is not pointed")
    if all(x >= 0 for r in rays for x in r):
        form = tuple(Fraction(1) for _ in range(domain.dim))
    else:
        form = tuple(sum((a[i] for a, _ in domain.inequalities), Fraction(0))
                     for i in range(domain.dim))
    if not all(dot(form, r) > 0 for r in rays):
        raise HypothesisError("could not find a form strictly positive on K \\ {0}")
    return form


def _slice_samples(f: HomogFn, form, count, rng):
    """Interior points of K normalised to l(v) = 1."""
    out = []
    for v in interior_samples(f.domain, count, rng, margin=Fraction(1, 200)):
        s = dot(form, v)
        out.append(tuple(x / s for x in v))
    return out


def build_ball_cone(f: HomogFn, form: Sequence | None = None, samples: int = 2000,
                    verify: int = 2000, safety=Fraction(21, 20), seed: int = 0) -> BallCone:
    """Choose l and k so that every ball B_{g(v)}(r(v)) lies in R_+^n.

    k is the sampled supremum of r(v)/l(v) (a degree-0 function) times
    ``safety``; the choice is then checked on a fresh sample.
    """
    form = qvec(form) if form is not None else default_form(f.domain)
    rays = f.domain.to_v().rays
    if not all(dot(form, r) > 0 for r in rays):
        raise HypothesisError("linear form is not strictly positive on K \\ {0}")
    rng = random.Random(seed)
    probe = BallCone(f, form, mp.mpf(0))
    with mp.workdps(DPS):
        ratios = []
        for v in _slice_samples(f, form, samples, rng):
            r = probe.radius(v)
            if not mp.isfinite(r):
                raise HypothesisError(f"r(v) is not finite at {v}")
            ratios.append(r)  # l(v) = 1 on the slice
        sup = max(ratios)
        if sup <= 0:
            raise HypothesisError("f vanishes on every sampled interior point")
        if sup > mp.mpf(10) ** 12:
            raise HypothesisError("sup of r/l appears to diverge")
        k = sup * to_ctx(safety)
        cone = BallCone(f, form, k)
        for v in _slice_samples(f, form, verify, random.Random(seed + 1)):
            if cone.radius(v) > k:
                raise HypothesisError(f"ball at v={v} leaves the orthant; raise the safety factor")
    return cone


def slice_volume_mc(c, v: Sequence, samples: int = 10**6, seed: int = 0,
                    chunk: int = 10**6):
    """Monte Carlo n-volume of {w : (w, v) in c}; returns (estimate, stderr).

    ``c`` is a :class:`BallCone`, :class:`ScaledCone`, or an H-polyhedral cone in
    R^n x R^rho (v gives the trailing coordinates).  stderr is ``None`` for a
    single sample.
    """
    if isinstance(c, HPolyhedron):
        sl = c.substitute(qvec(v))
        if sl.is_empty or not sl.is_bounded:
            raise ValueError("slice is empty or unbounded")
        verts = np.array([[float(x) for x in p] for p in sl.vertices()])
        lo, hi = verts.min(axis=0), verts.max(axis=0)
        A = np.array([[float(x) for x in a] for a, _ in sl.inequalities])
        b = np.array([float(b) for _, b in sl.inequalities])
        hits_fn = lambda pts: np.all(pts @ A.T >= b, axis=1)
    else:
        lo, hi = c.bounding_box(v)
        hits_fn = lambda pts: c._mc_hits(v, pts)
    width = hi - lo
    if np.any(width <= 0):
        raise ValueError("degenerate bounding box")
    box = float(np.prod(width))
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        pts = lo + width * rng.random((m, len(lo)))
        hits += int(np.count_nonzero(hits_fn(pts)))
        done += m
    p = hits / samples
    est = box * p
    if samples < 2:
        return est, None
    se = box * np.sqrt(p * (1 - p) / (samples - 1))
    return est, float(se)


def _homogeneous_rows(target):
    """The H-cone behind ``target`` and its inequalities, checked homogeneous."""
    cone = target if isinstance(target, HPolyhedron) else target.cone
    rows = []
    for a, b in cone.inequalities:
        if b != 0:
            raise ShrinkError("target must be a cone")
        rows.append((a, b))
    return cone, rows


def shrink_into(c: BallCone, target, n_v: int = 200, seed: int = 0):
    """Largest lambda in (0, 1] whose squeezed cone fits in ``target`` on a sample.

    ``target`` is an OkounkovCone (or any homogeneous H-cone in R^n x R^rho).
    The sample takes, for each sampled v, the points of the ball that are
    extremal for every target inequality plus a few random ball points.
    Bisection runs in floating point; the returned lambda is then confirmed
    with exact rational membership.  Returns ``(lam, ScaledCone, lam**n)``.
    """
    cone, rows = _homogeneous_rows(target)
    n, rho = c.n, c.rho
    if cone.dim != n + rho:
        raise ShrinkError(f"target lives in R^{cone.dim}, ball cone in R^{n + rho}")
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    vs = [tuple(t * x for x in v)
          for v, t in zip(_slice_samples(c.f, c.form, n_v, rng),
                          (Fraction(rng.randint(1, 40), 8) for _ in range(n_v)))]
    vs += [tuple(x for x in r) for r in c.domain.to_v().rays]  # boundary directions
    A = [(np.array([float(x) for x in a[:n]]), np.array([float(x) for x in a[n:]])) for a, _ in rows]
    pts_w, pts_v = [], []
    for v in vs:
        r = float(c.radius(v))
        g = np.array([float(x) for x in c.center(v)])
        cand = [g]
        for ax, _ in A:
            nrm = np.linalg.norm(ax)
            if nrm > 0:
                cand.append(g - r * (1 - 1e-12) * ax / nrm)
        d = nrng.normal(size=(4, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        cand.extend(g + r * (1 - 1e-12) * d)
        for w in cand:
            pts_w.append(w)
            pts_v.append(np.array([float(x) for x in v]))
    W = np.array(pts_w)
    V = np.array(pts_v)
    Ax = np.array([ax for ax, _ in A])
    Av = np.array([av for _, av in A])
    vpart = V @ Av.T

    def ok_float(lam):
        return bool(np.all(lam * (W @ Ax.T) + vpart >= -1e-12 * (1 + np.abs(vpart))))

    def ok_exact(lam):
        lam = rat(lam)
        for w, v in zip(pts_w, pts_v):
            x = tuple(lam * Fraction(float(t)) for t in w) + tuple(Fraction(float(t)) for t in v)
            if not cone.contains(x):
                return False
        return True

    lo_lam = 1e-6
    if ok_float(1.0) and ok_exact(1):
        lam = Fraction(1)
    else:
        if not ok_float(lo_lam):
            raise ShrinkError("no admissible lambda above 1e-6; supports do not match")
        lo, hi = lo_lam, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            if ok_float(mid):
                lo = mid
            else:
                hi = mid
        lam = Fraction(lo).limit_denominator(10**9)
        while lam > Fraction(lo_lam) and not ok_exact(lam):
            lam *= Fraction(999999, 1000000)
        if lam <= Fraction(lo_lam):
            raise ShrinkError("exact verification failed for every lambda above 1e-6")
    squeezed = ScaledCone(c, lam)
    return lam, squeezed, lam ** n


def verification_sample(c: BallCone, count: int = 100, seed: int = 0):
    """Random (w, v) points of C' (float w, rational v), for containment checks."""
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    out = []
    for v in _slice_samples(c.f, c.form, count, rng):
        t = Fraction(rng.randint(1, 24), 8)
        v = tuple(t * x for x in v)
        r = float(c.radius(v))
        g = float(c.center(v)[0])
        d = nrng.normal(size=c.n)
        d /= np.linalg.norm(d)
        w = g + r * nrng.random() ** (1 / c.n) * d * (1 - 1e-9)
        out.append((tuple(float(x) for x in w), v))
    return out
