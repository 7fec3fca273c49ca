"""Homogeneous log-concave functions and the concave profiles they come from.

Evaluators take ``(v, ctx)`` where ``ctx`` is an mpmath context (``mp`` or
``iv``), so one formula serves both high-precision and interval evaluation.
"""
from __future__ import annotations

import random
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import iv, mp

from ..exactgeom import HPolyhedron
from ..exactgeom.rational import qvec, rat

DPS = 50


class HypothesisError(ValueError):
    """Sampled evidence contradicts homogeneity, log-concavity or positivity."""


def to_ctx(x, ctx=mp):
    """Exact conversion of a rational/float into an mpmath (interval) number."""
    if isinstance(x, (mpmath.mpf, type(iv.mpf(0)))):
        return x
    q = rat(x)
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


@dataclass(frozen=True)
class HomogFn:
    """f : K -> R_+, homogeneous of degree ``degree`` and log-concave of that degree."""

    domain: HPolyhedron
    degree: int
    fn: Callable
    kind: str = "analytic"
    label: str = ""

    @property
    def p(self) -> int:
        return self.domain.dim

    def __call__(self, v: Sequence, ctx=mp):
        if len(v) != self.p:
            raise ValueError(f"expected a point of R^{self.p}")
        if not self.domain.contains(qvec(v)):
            raise ValueError(f"{tuple(map(str, qvec(v)))} is outside the domain cone")
        if ctx is mp:
            with mp.workdps(DPS):
                return self.fn([to_ctx(x) for x in v], mp)
        return self.fn([to_ctx(x, ctx) for x in v], ctx)

    def root(self, v, ctx=mp):
        """f(v)^(1/n)."""
        val = self(v, ctx)
        if ctx is mp:
            with mp.workdps(DPS):
                return mp.root(val, self.degree) if val > 0 else mp.mpf(0)
        return _iv_root(val, self.degree)

    def check_hypotheses(self, samples: int = 200, seed: int = 0, rtol: float = 1e-10):
        """Sampled homogeneity (t in 1/2, 2, 3) and midpoint concavity of f^(1/n).

        Sampling cannot prove the hypotheses; a returned violation list that is
        empty only means none were seen.
        """
        rng = random.Random(seed)
        pts = interior_samples(self.domain, samples, rng)
        violations = []
        with mp.workdps(DPS):
            for v in pts:
                fv = self(v)
                for t in (Fraction(1, 2), Fraction(2), Fraction(3)):
                    ft = self(tuple(t * x for x in v))
                    want = mp.mpf(t.numerator) ** self.degree / mp.mpf(t.denominator) ** self.degree * fv
                    if abs(ft - want) > rtol * max(abs(want), mp.mpf(1e-300)):
                        violations.append(("homogeneity", v, t))
            for v, w in zip(pts[::2], pts[1::2]):
                mid = tuple((a + b) / 2 for a, b in zip(v, w))
                lhs = self.root(mid)
                rhs = (self.root(v) + self.root(w)) / 2
                if lhs < rhs - rtol * max(abs(rhs), mp.mpf(1)):
                    violations.append(("concavity", v, w))
        return violations


def _iv_root(x, n):
    if n == 1:
        return x
    if n == 2:
        return iv.sqrt(x)
    return iv.exp(iv.log(x) / n)


def interior_samples(cone: HPolyhedron, count: int, rng: random.Random,
                     lo: Fraction = Fraction(1, 2), hi: Fraction = Fraction(3),
                     margin: Fraction = Fraction(1, 20)) -> list[tuple]:
    """Rational points in the interior of a pointed cone.

    Points are convex combinations of the extreme rays with weights bounded
    below by ``margin`` (so they stay away from the boundary), rescaled by a
    random factor in [lo, hi].
    """
    rays = list(cone.to_v().rays)
    if not rays:
        raise ValueError("cone has no rays")
    out = []
    for _ in range(count):
        w = [Fraction(rng.randint(1, 1000), 1000) + margin for _ in rays]
        tot = sum(w)
        t = lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000)
        out.append(tuple(t * sum(wi * r[i] for wi, r in zip(w, rays)) / tot
                         for i in range(cone.dim)))
    return out


def positive_orthant(p: int) -> HPolyhedron:
    return HPolyhedron.cone([[int(i == j) for j in range(p)] for i in range(p)])


def product_function(p: int = 2) -> HomogFn:
    """f(v) = v_1 ... v_p on R_+^p (degree p)."""

    def fn(v, ctx):
        out = v[0]
        for x in v[1:]:
            out = out * x
        return out

    return HomogFn(positive_orthant(p), p, fn, "analytic", f"product{p}")


@dataclass(frozen=True)
class ConcaveProfile:
    """A concave g >= 0 on B, where B is the slice {h . v = 1} of K in the chart
    x_i = v_i / (h . v), i < p - 1."""

    base: HPolyhedron
    g: Callable
    hyperplane: tuple = field(default=())
    label: str = ""

    def __post_init__(self):
        h = qvec(self.hyperplane) if self.hyperplane else tuple(
            Fraction(1) for _ in range(self.base.dim + 1))
        if len(h) != self.base.dim + 1:
            raise ValueError("hyperplane functional must live in R^(dim B + 1)")
        if h[-1] == 0:
            raise ValueError("chart needs a non-zero last coefficient")
        object.__setattr__(self, "hyperplane", h)

    @property
    def p(self) -> int:
        return self.base.dim + 1

    def __call__(self, x: Sequence, ctx=mp):
        if ctx is mp:
            with mp.workdps(DPS):
                return self.g([to_ctx(t) for t in x], mp)
        return self.g([to_ctx(t, ctx) for t in x], ctx)

    def cone(self) -> HPolyhedron:
        """K = cone over B, as an H-polyhedron in R^p."""
        h = self.hyperplane
        q = self.p - 1
        rows = []
        for a, b in self.base.inequalities:
            # a . (v_<q / s) >= b  with s = h . v > 0
            rows.append(tuple(a[i] - b * h[i] for i in range(q)) + (-b * h[q],))
        rows.append(tuple(h))
        return HPolyhedron.cone(rows, self.p)

    def midpoint_concavity_violations(self, samples: int = 500, seed: int = 0,
                                      tol: float = 1e-12) -> list:
        rng = random.Random(seed)
        verts = self.base.to_v().vertices
        bad = []
        with mp.workdps(DPS):
            for _ in range(samples):
                x, y = (_random_in(verts, rng) for _ in range(2))
                mid = tuple((a + b) / 2 for a, b in zip(x, y))
                gm, gx, gy = self(mid), self(x), self(y)
                if gm < (gx + gy) / 2 - tol or gx < -tol:
                    bad.append((x, y))
        return bad


def _random_in(verts, rng):
    w = [Fraction(rng.randint(0, 1000)) for _ in verts]
    if not any(w):
        w[0] = Fraction(1)
    tot = sum(w)
    return tuple(sum(wi * v[i] for wi, v in zip(w, verts)) / tot for i in range(len(verts[0])))


def homogenize(profile: ConcaveProfile, n: int) -> HomogFn:
    """f(v) = (s(v) * g(pi(v)))^n with s = h . v and pi the chart of the slice."""
    if n < 1:
        raise ValueError("degree must be positive")
    h = profile.hyperplane
    q = profile.p - 1
    g = profile.g

    def fn(v, ctx):
        s = v[0] * to_ctx(h[0], ctx)
        for i in range(1, len(v)):
            s = s + v[i] * to_ctx(h[i], ctx)
        if s == 0:
            return ctx.mpf(0)
        x = [v[i] / s for i in range(q)]
        return (s * g(x, ctx)) ** n

    return HomogFn(profile.cone(), n, fn, "profile", profile.label)


def constant_profile(p: int = 2) -> ConcaveProfile:
    """g = 1 on the standard (p-1)-simplex slice of R_+^p."""
    base = HPolyhedron.simplex(p - 1)
    return ConcaveProfile(base, lambda x, ctx: ctx.mpf(1), label="constant")


def semicircle_profile() -> ConcaveProfile:
    """g(x) = sqrt(x (1 - x)) on [0, 1]; homogenizes to v_1 v_2 for n = 2."""
    base = HPolyhedron.box([0], [1])

    def g(x, ctx):
        t = x[0] * (1 - x[0])
        if ctx is not mp:
            return iv.sqrt(t)
        return ctx.sqrt(t) if t > 0 else ctx.mpf(0)

    return ConcaveProfile(base, g, label="semicircle")


def weierstrass_profile(lo=0, hi=1, terms: int = 8, a=Fraction(1, 2), b: int = 3) -> ConcaveProfile:
    """Concave profile whose second derivative is a truncated Weierstrass series.

    g'' = -(1 + sum_{k=1}^{terms} a^k cos(b^k pi x)) stays negative while the
    partial sum of a^k is below 1 (checked).  The affine part is fixed so that
    g vanishes at both ends of B = [lo, hi]; concavity then gives g >= 0 on B.
    """
    a = rat(a)
    lo, hi = rat(lo), rat(hi)
    if not (0 < a < 1):
        raise ValueError("need 0 < a < 1")
    if b < 1 or b % 2 == 0:
        raise ValueError("b must be a positive odd integer")
    if a * b <= 1:
        raise ValueError("need a*b > 1")
    if terms < 0:
        raise ValueError("terms must be non-negative")
    if hi <= lo:
        raise ValueError("empty interval")
    if sum(a ** k for k in range(1, terms + 1)) >= 1:
        raise ValueError("partial sums of a^k reach 1; g'' would change sign")

    def h(x, ctx):
        out = -x * x / 2
        pi = ctx.pi
        ak = to_ctx(a, ctx)
        for k in range(1, terms + 1):
            w = ctx.mpf(b) ** k * pi
            out = out + ak ** k * ctx.cos(w * x) / (w * w)
        return out

    def g(x, ctx):
        t = x[0]
        l, r = to_ctx(lo, ctx), to_ctx(hi, ctx)
        hl, hr = h(l, ctx), h(r, ctx)
        return h(t, ctx) - (hl * (r - t) + hr * (t - l)) / (r - l)

    return ConcaveProfile(HPolyhedron.box([lo], [hi]), g, label=f"weierstrass(a={a},b={b},terms={terms})")


def weierstrass_second_derivative(x, terms: int = 8, a=Fraction(1, 2), b: int = 3):
    """g'' of :func:`weierstrass_profile` (closed form, for concavity checks)."""
    with mp.workdps(DPS):
        x = to_ctx(x)
        out = mp.mpf(-1)
        for k in range(1, terms + 1):
            out -= to_ctx(rat(a)) ** k * mp.cos(mp.mpf(b) ** k * mp.pi * x)
        return out


@dataclass
class CertReport:
    """Outcome of an interval-arithmetic check over many samples.

    ``violations`` are certified failures (the intervals separate the wrong
    way); ``undecided`` samples had overlapping intervals.
    """

    checked: int = 0
    violations: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    max_width: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


@contextmanager
def iv_precision(dps: int):
    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


def _iv_value(f, v):
    """f(v) as an interval: HomogFn via the iv context, anything else exactly."""
    if isinstance(f, HomogFn):
        return f(v, iv)
    val = f(v)
    if isinstance(val, (int, Fraction)):
        return to_ctx(val, iv)
    return iv.mpf(val)


def _iv_nonneg_root(x, n):
    if x.b <= 0:
        return iv.mpf(0)
    if x.a <= 0:
        return iv.mpf([0, _iv_root(iv.mpf(x.b), n).b])
    return _iv_root(x, n)


def certify_log_concavity(f, n: int, pairs, dps: int = 40) -> CertReport:
    """f(a+b)^(1/n) >= f(a)^(1/n) + f(b)^(1/n) on each pair, in interval arithmetic."""
    rep = CertReport()
    with iv_precision(dps):
        for a, b in pairs:
            s = tuple(x + y for x, y in zip(qvec(a), qvec(b)))
            lhs = _iv_nonneg_root(_iv_value(f, s), n)
            rhs = _iv_nonneg_root(_iv_value(f, a), n) + _iv_nonneg_root(_iv_value(f, b), n)
            rep.checked += 1
            rep.max_width = max(rep.max_width, float(lhs.delta), float(rhs.delta))
            if lhs.b < rhs.a:
                rep.violations.append((a, b))
            elif lhs.a < rhs.b:
                rep.undecided.append((a, b))
    return rep


def certify_homogeneity(f, n: int, points, ts=(Fraction(1, 2), Fraction(2), Fraction(3)),
                        dps: int = 40) -> CertReport:
    """f(t v) = t^n f(v): a violation is a certified non-zero difference."""
    rep = CertReport()
    with iv_precision(dps):
        for v in points:
            fv = _iv_value(f, v)
            for t in ts:
                ft = _iv_value(f, tuple(rat(t) * x for x in qvec(v)))
                diff = ft - to_ctx(rat(t) ** n, iv) * fv
                rep.checked += 1
                rep.max_width = max(rep.max_width, float(ft.delta), float(fv.delta))
                if diff.a > 0 or diff.b < 0:
                    rep.violations.append((v, t))
    return rep
