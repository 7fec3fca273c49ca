"""Okounkov cones of complete multigraded series on toric models, subcone
subseries, slices and the multigraded volume function.

Coordinates on the ambient space are ``(x_1..x_n, m_1..m_rho)``: valuation
vector first, multidegree last.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .exactgeom import HPolyhedron, count_lattice_points, lattice_points, volume
from .exactgeom.rational import qvec
from .toric import (Fan, FlagSpec, TorusDivisor, flag_matrix_inverse, flag_valuation,
                    h0_count, is_big, sections)


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesSpec:
    """Complete multigraded series V_m = H^0(X, O(m_1 H_1 + ... + m_rho H_rho))."""

    fan: Fan
    divisors: tuple
    flag: FlagSpec | None = None
    require_big: bool = False

    def __post_init__(self):
        """Each H_j must be effective and H_1 + ... + H_rho big; with
        ``require_big`` every H_j must be big on its own."""
        if not self.divisors:
            raise SeriesError("need at least one divisor")
        object.__setattr__(self, "divisors", tuple(self.divisors))
        if self.flag is None:
            object.__setattr__(self, "flag", FlagSpec.standard(self.fan))
        self.flag.check(self.fan)
        for j, h in enumerate(self.divisors):
            if h.fan != self.fan:
                raise SeriesError(f"divisor {j} lives on a different fan")
            if self.require_big and not is_big(h):
                raise SeriesError(f"divisor H_{j + 1} = {list(h.coeffs)} is not big")
            if h.polytope().is_empty:
                raise SeriesError(f"divisor H_{j + 1} = {list(h.coeffs)} has no sections")
        total = self.divisors[0]
        for h in self.divisors[1:]:
            total = total + h
        if not is_big(total):
            raise SeriesError("H_1 + ... + H_rho is not big; the series has no volume")

    @property
    def n(self) -> int:
        return self.fan.n

    @property
    def rho(self) -> int:
        return len(self.divisors)

    def divisor_at(self, m: Sequence[int]) -> TorusDivisor:
        coeffs = [0] * len(self.fan.rays)
        for mj, h in zip(m, self.divisors):
            for i, a in enumerate(h.coeffs):
                coeffs[i] += int(mj) * a
        return TorusDivisor(self.fan, tuple(coeffs))


@dataclass(frozen=True)
class OkounkovCone:
    n: int
    rho: int
    cone: HPolyhedron

    @property
    def dim(self) -> int:
        return self.n + self.rho


@dataclass(frozen=True)
class SubSeries:
    """W_m spanned by chi^u with (nu(chi^u), m) in the subcone ``cone``."""

    parent: SeriesSpec
    cone: HPolyhedron
    parent_cone: OkounkovCone

    @property
    def n(self) -> int:
        return self.parent.n

    @property
    def rho(self) -> int:
        return self.parent.rho

    def as_cone(self) -> OkounkovCone:
        return OkounkovCone(self.n, self.rho, self.cone)


def okounkov_cone(s: SeriesSpec) -> OkounkovCone:
    """Exact H-form of the Okounkov cone of ``s``.

    Writing x = nu(chi^u) = V u + a_flag(m) with V the (unimodular) flag-ray
    matrix, u is eliminated by substitution: the flag rays give x >= 0, every
    other ray j gives <V^{-1}(x - a_flag(m)), v_j> + a_j(m) >= 0.
    """
    fan, flag = s.fan, s.flag
    n, rho = s.n, s.rho
    vinv = flag_matrix_inverse(fan, flag)
    # a_i(m) = sum_k m_k H_k[i]  -> coefficient row of i in m-coordinates
    amat = [[Fraction(h.coeffs[i]) for h in s.divisors] for i in range(len(fan.rays))]
    ineqs = []
    for i in range(n):
        e = [Fraction(0)] * (n + rho)
        e[i] = Fraction(1)
        ineqs.append((tuple(e), Fraction(0)))
    for j, vj in enumerate(fan.rays):
        if j in flag.cone:
            continue
        # w = V^{-T} v_j so that <V^{-1} y, v_j> = <y, w>
        w = [sum(vinv[r][c] * vj[r] for r in range(n)) for c in range(n)]
        mcoef = [amat[j][k] - sum(w[c] * amat[flag.cone[c]][k] for c in range(n))
                 for k in range(rho)]
        ineqs.append((tuple(w) + tuple(mcoef), Fraction(0)))
    for k in range(rho):
        e = [Fraction(0)] * (n + rho)
        e[n + k] = Fraction(1)
        ineqs.append((tuple(e), Fraction(0)))
    return OkounkovCone(n, rho, HPolyhedron(n + rho, tuple(ineqs)))


def _cone_of(c) -> OkounkovCone:
    if isinstance(c, SubSeries):
        return c.as_cone()
    if isinstance(c, SeriesSpec):
        return okounkov_cone(c)
    return c


def slice(c, m: Sequence) -> HPolyhedron:
    """The fibre of the cone over multidegree ``m`` as a polytope in R^n."""
    c = _cone_of(c)
    m = qvec(m)
    if len(m) != c.rho:
        raise SeriesError(f"multidegree has {len(m)} entries, expected {c.rho}")
    return c.cone.substitute(m)


def support(c) -> HPolyhedron:
    """p_2 of the cone, i.e. the support of the series, in R^rho."""
    c = _cone_of(c)
    return c.cone.project(range(c.n, c.n + c.rho))


def support_status(c, m: Sequence) -> str:
    """``"interior"``, ``"boundary"`` or ``"outside"`` of the support cone."""
    supp = support(c)
    if supp.contains(m, strict=False):
        # strict containment is only meaningful for an irredundant system
        inner = supp.pruned()
        if inner.contains(m, strict=True) and supp.affine_dim() == supp.dim:
            return "interior"
        return "boundary"
    return "outside"


@dataclass(frozen=True)
class VolumeValue:
    value: Fraction
    status: str


def volfn(c, m: Sequence) -> Fraction:
    """vol_W(m) = n! * vol_{R^n}(slice at m); zero off the interior of the support."""
    c = _cone_of(c)
    sl = slice(c, m)
    return factorial(c.n) * volume(sl)


def volfn_ex(c, m: Sequence) -> VolumeValue:
    """Like :func:`volfn` but tags whether ``m`` sits inside, on or off the support."""
    status = support_status(c, m)
    if status == "outside":
        return VolumeValue(Fraction(0), status)
    return VolumeValue(volfn(c, m), status)


def direct_vol_estimate(s, m: Sequence[int], k: int) -> Fraction:
    """dim W_{k m} * n! / k^n from a direct count of sections."""
    if k < 1:
        raise ValueError("k must be positive")
    m = [int(x) for x in m]
    if isinstance(s, SubSeries):
        dim = fiber_dimension(s, [k * x for x in m])
        n = s.n
    else:
        if any(x < 0 for x in m):
            return Fraction(0)
        dim = h0_count(s.divisor_at([k * x for x in m]))
        n = s.n
    return Fraction(dim * factorial(n), k ** n)


def vol_sequence(s, m: Sequence[int], ks: Iterable[int]) -> list[tuple[int, Fraction]]:
    """The k-sequence of direct estimates, for inspecting convergence."""
    return [(k, direct_vol_estimate(s, m, k)) for k in ks]


def fit_rate_constant(seq, limit) -> float:
    """Smallest C with |a_k - limit| <= C / k over the given (k, a_k) pairs."""
    return max(abs(float(a - limit)) * k for k, a in seq)


def subseries(s: SeriesSpec, sub: HPolyhedron) -> SubSeries:
    """The subseries whose semigroup is Gamma(V) intersected with ``sub``."""
    parent = okounkov_cone(s)
    if sub.dim != parent.dim:
        raise SeriesError(f"subcone lives in R^{sub.dim}, expected R^{parent.dim}")
    if not sub.is_homogeneous:
        raise SeriesError("subcone must be a cone (all offsets zero)")
    v = sub.to_v()
    if v.affine_dim() < sub.dim:
        raise SeriesError("subcone has empty interior")
    bad = [r for r in v.rays if not parent.cone.contains(r)]
    bad += [l for l in v.lines]  # the parent cone is pointed
    if bad:
        raise SeriesError(
            "subcone is not contained in the Okounkov cone; violating generators: "
            + ", ".join(str(tuple(map(str, r))) for r in bad))
    return SubSeries(s, sub, parent)


def fiber_dimension(sub: SubSeries, m: Sequence[int]) -> int:
    """dim W_m: lattice points of the subcone fibre that are valuation vectors of
    sections of V_m.  For the complete toric series every lattice point of the
    parent fibre is such a vector, so this is a lattice count of the fibre."""
    if any(int(x) < 0 for x in m):
        return 0
    return count_lattice_points(sub.cone.substitute(m).intersect(slice(sub.parent_cone, m)))


@dataclass(frozen=True)
class FiberReport:
    m: tuple
    lattice_points: int      # lattice points of the subcone fibre
    sections: int            # characters with (nu(chi^u), m) in the subcone
    saturation_gap: int      # points needing a multiple to enter the semigroup


def fiber_report(sub: SubSeries, m: Sequence[int]) -> FiberReport:
    """Compare the fibre lattice count against the character-by-character count."""
    m = tuple(int(x) for x in m)
    fibre = sub.cone.substitute(m)
    pts = lattice_points(fibre) if fibre.is_bounded else []
    counted = 0
    if all(x >= 0 for x in m):
        d = sub.parent.divisor_at(m)
        for u in sections(d):
            nu = flag_valuation(u, d, sub.parent.flag)
            if sub.cone.contains(tuple(nu) + m):
                counted += 1
    parent_fibre = slice(sub.parent_cone, m)
    in_gamma = sum(1 for p in pts if parent_fibre.contains(p))
    return FiberReport(m, len(pts), counted, len(pts) - in_gamma)


def semigroup_fibre(c, m: Sequence[int]) -> list[tuple]:
    """Lattice points of the fibre over integral ``m`` (Gamma_m for toric series)."""
    c = _cone_of(c)
    return lattice_points(slice(c, m))
