"""Smooth complete toric varieties as fans, torus-invariant divisors and their
polytopes, section counts, and flag valuations of character sections.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .exactgeom import HPolyhedron, count_lattice_points, lattice_points
from .exactgeom.rational import det, dot, inverse, qvec, solve


class FanError(ValueError):
    """Raised when a fan fails validation or a model name is unknown."""


@dataclass
class ValidationReport:
    smooth: bool = True
    complete: bool = True
    primitive: bool = True
    flag_cone: bool = True
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.primitive and self.flag_cone

    def raise_if_invalid(self):
        if not self.ok:
            raise FanError("invalid fan: " + "; ".join(self.problems))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "smooth": self.smooth,
            "complete": self.complete,
            "primitive": self.primitive,
            "flag_cone": self.flag_cone,
            "problems": list(self.problems),
        }


@dataclass(frozen=True)
class Fan:
    """A simplicial fan in N_R = R^n given by primitive rays and maximal cones.

    The first ``n`` rays are expected to span a maximal cone (the flag cone);
    :meth:`reindexed` moves some maximal cone to the front when they do not.
    """

    n: int
    rays: tuple
    max_cones: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )

    @property
    def rho(self) -> int:
        """Picard number n_rays - n of a smooth complete fan."""
        return len(self.rays) - self.n

    def validate(self, samples: int = 64, seed: int = 0) -> ValidationReport:
        return validate(self, samples=samples, seed=seed)

    def reindexed(self) -> "Fan":
        """Copy whose first n rays span a maximal cone (no-op if they already do)."""
        head = tuple(range(self.n))
        if head in self.max_cones:
            return self
        cone = self.max_cones[0]
        order = list(cone) + [i for i in range(len(self.rays)) if i not in cone]
        pos = {old: new for new, old in enumerate(order)}
        return Fan(
            self.n,
            tuple(self.rays[i] for i in order),
            tuple(tuple(pos[i] for i in c) for c in self.max_cones),
            self.name,
        )

    def to_dict(self) -> dict:
        return {"n": self.n, "rays": [list(r) for r in self.rays],
                "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_dict(cls, d: dict) -> "Fan":
        return cls(int(d["n"]), tuple(map(tuple, d["rays"])), tuple(map(tuple, d["max_cones"])),
                   d.get("name", ""))

    @classmethod
    def from_json(cls, s: str) -> "Fan":
        return cls.from_dict(json.loads(s))

    def divisor(self, coeffs: Sequence[int]) -> "TorusDivisor":
        return TorusDivisor(self, tuple(coeffs))


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, tuple(rays), tuple(cones), f"P{n}")


def p1xp1() -> Fan:
    return Fan(2, ((1, 0), (0, 1), (-1, 0), (0, -1)),
               ((0, 1), (1, 2), (2, 3), (0, 3)), "P1xP1")


def hirzebruch(r: int) -> Fan:
    """F_r with rays (1,0), (0,1), (-1,r), (0,-1); D_3, D_4 generate Pic."""
    return Fan(2, ((1, 0), (0, 1), (-1, r), (0, -1)),
               ((0, 1), (1, 2), (2, 3), (0, 3)), f"Hirzebruch:{r}")


def named_model(name: str) -> Fan:
    """Built-in models: ``P2``, ``P1xP1``, ``Hirzebruch:r`` and ``P:n``."""
    key = name.strip()
    if key == "P2":
        return projective_space(2)
    if key == "P1xP1":
        return p1xp1()
    if key.startswith("Hirzebruch:"):
        return hirzebruch(int(key.split(":", 1)[1]))
    if key.startswith("P:"):
        return projective_space(int(key.split(":", 1)[1]))
    raise FanError(f"unknown model {name!r}")


def _in_cone_interior(fan: Fan, cone, x) -> bool:
    basis = [fan.rays[i] for i in cone]
    # x = sum lam_i v_i  <=>  basis^T lam = x
    cols = [[basis[j][i] for j in range(fan.n)] for i in range(fan.n)]
    lam = solve(cols, x)
    return all(l > 0 for l in lam)


def validate(fan: Fan, samples: int = 64, seed: int = 0) -> ValidationReport:
    """Check primitivity, smoothness, completeness and the flag-cone convention.

    Completeness is certified by the pseudomanifold condition (every ridge in
    exactly two maximal cones, lying on opposite sides) together with a
    covering-degree check on random rational directions.
    """
    rep = ValidationReport()
    n = fan.n
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            rep.primitive = False
            rep.problems.append(f"ray {i} has wrong length")
            continue
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            rep.primitive = False
            rep.problems.append(f"ray {i} = {r} is not primitive")
    if not rep.primitive:
        rep.smooth = rep.complete = False
        return rep

    for c in fan.max_cones:
        if len(c) != n or abs(det([fan.rays[i] for i in c])) != 1:
            rep.smooth = False
            rep.problems.append(f"cone {list(c)} is not unimodular")
    if not rep.smooth:
        rep.complete = False
        rep.problems.append("completeness not checked for a non-smooth fan")
        return rep

    ridges: dict = {}
    for c in fan.max_cones:
        for ridge in itertools.combinations(c, n - 1):
            ridges.setdefault(ridge, []).append(c)
    for ridge, cones in ridges.items():
        if len(cones) != 2:
            rep.complete = False
            rep.problems.append(f"ridge {list(ridge)} lies in {len(cones)} maximal cone(s)")
            continue
        sides = []
        for c in cones:
            (extra,) = [i for i in c if i not in ridge]
            sides.append(det([fan.rays[i] for i in ridge] + [fan.rays[extra]]))
        if sides[0] * sides[1] >= 0:
            rep.complete = False
            rep.problems.append(f"cones around ridge {list(ridge)} overlap")
    if rep.complete:
        rng = random.Random(seed)
        for _ in range(samples):
            x = tuple(Fraction(rng.randint(-10**6, 10**6), 10**6 + rng.randint(0, 999))
                      for _ in range(n))
            if not any(x):
                continue
            hits = sum(_in_cone_interior(fan, c, x) for c in fan.max_cones)
            if hits != 1:
                rep.complete = False
                rep.problems.append(f"direction {x} is covered {hits} times")
                break

    head = tuple(range(n))
    if head not in fan.max_cones:
        rep.flag_cone = False
        rep.problems.append("rays 0..n-1 do not span a maximal cone; use Fan.reindexed()")
    return rep


@dataclass(frozen=True)
class TorusDivisor:
    """D = sum a_i D_i on the toric variety of ``fan``."""

    fan: Fan
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))
        if len(self.coeffs) != len(self.fan.rays):
            raise ValueError(
                f"{len(self.coeffs)} coefficients for {len(self.fan.rays)} rays")

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, k: int) -> "TorusDivisor":
        return TorusDivisor(self.fan, tuple(k * a for a in self.coeffs))

    def polytope(self) -> HPolyhedron:
        return divisor_polytope(self)


@dataclass(frozen=True)
class FlagSpec:
    """Y_i = D_{c_1} cap ... cap D_{c_i} for the ordered maximal cone ``cone``."""

    cone: tuple = ()

    @classmethod
    def standard(cls, fan: Fan) -> "FlagSpec":
        return cls(tuple(range(fan.n)))

    def check(self, fan: Fan):
        if len(self.cone) != fan.n or tuple(sorted(self.cone)) not in fan.max_cones:
            raise FanError(f"flag rays {list(self.cone)} do not span a maximal cone")


def divisor_polytope(d: TorusDivisor) -> HPolyhedron:
    """P_D = {u : <u, v_i> >= -a_i for every ray}."""
    return HPolyhedron(d.fan.n, tuple((v, -a) for v, a in zip(d.fan.rays, d.coeffs)))


def h0_count(d: TorusDivisor) -> int:
    """dim H^0(X, O(D)) as the number of lattice points of P_D."""
    return count_lattice_points(divisor_polytope(d))


def sections(d: TorusDivisor) -> list[tuple]:
    """Characters u indexing the isotypical basis of H^0(X, O(D))."""
    return lattice_points(divisor_polytope(d))


def flag_valuation(u: Sequence, d: TorusDivisor, flag: FlagSpec | None = None) -> tuple:
    """nu(chi^u) = (<u, v_c> + a_c) over the flag rays, in order."""
    fan = d.fan
    flag = flag or FlagSpec.standard(fan)
    flag.check(fan)
    u = qvec(u)
    if any(x.denominator != 1 for x in u):
        raise ValueError(f"{u} is not a character (non-integral)")
    if not divisor_polytope(d).contains(u):
        raise ValueError(f"chi^{tuple(map(int, u))} is not a section of O(D)")
    return tuple(int(dot(u, fan.rays[i]) + d.coeffs[i]) for i in flag.cone)


def flag_matrix_inverse(fan: Fan, flag: FlagSpec):
    """Inverse of the matrix whose rows are the flag rays (integral: unimodular)."""
    return inverse([fan.rays[i] for i in flag.cone])


def is_big(d: TorusDivisor) -> bool:
    return divisor_polytope(d).affine_dim() == d.fan.n
