"""Inequality (H) and generator (V) representations of rational polyhedra."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .dd import cone_generators
from .rational import dot, primitive, qvec, rank, rat


class DimensionMismatch(ValueError):
    pass


class UnboundedError(ValueError):
    pass


def _canon(normal, offset):
    """Scale ``normal . x >= offset`` to coprime integers (positive factor)."""
    both = primitive(tuple(normal) + (offset,))
    return both[:-1], both[-1]


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """``{x : normal . x >= offset}`` for every stored inequality.

    Inequalities with a zero normal are dropped when trivially true; a false
    one (``0 >= positive``) marks the polyhedron empty.
    """

    dim: int
    inequalities: tuple = ()
    empty: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        cleaned = []
        empty = self.empty
        for normal, offset in self.inequalities:
            normal, offset = qvec(normal), rat(offset)
            if len(normal) != self.dim:
                raise DimensionMismatch(f"normal {normal} has length != {self.dim}")
            if all(x == 0 for x in normal):
                if offset > 0:
                    empty = True
                # trivially satisfied rows carry no information
                continue
            cleaned.append((normal, offset))
        object.__setattr__(self, "inequalities", tuple(cleaned))
        object.__setattr__(self, "empty", empty)

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], dim: int | None = None) -> "HPolyhedron":
        """Rows ``(a_1, ..., a_n, b)`` meaning ``a . x >= b``."""
        rows = [qvec(r) for r in rows]
        if dim is None:
            dim = len(rows[0]) - 1
        return cls(dim, tuple((r[:-1], r[-1]) for r in rows))

    @classmethod
    def empty_set(cls, dim: int) -> "HPolyhedron":
        return cls(dim, (), empty=True)

    @classmethod
    def cone(cls, normals: Iterable[Sequence], dim: int | None = None) -> "HPolyhedron":
        normals = [qvec(a) for a in normals]
        dim = dim if dim is not None else len(normals[0])
        return cls(dim, tuple((a, Fraction(0)) for a in normals))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "HPolyhedron":
        n = len(lo)
        ineqs = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            ineqs.append((e, lo[i]))
            e = [0] * n
            e[i] = -1
            ineqs.append((e, -rat(hi[i])))
        return cls(n, tuple(ineqs))

    @classmethod
    def simplex(cls, n: int, scale=1) -> "HPolyhedron":
        """``{x >= 0, sum x <= scale}``."""
        ineqs = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            ineqs.append((e, 0))
        ineqs.append(([-1] * n, -rat(scale)))
        return cls(n, tuple(ineqs))

    # -- basic queries -----------------------------------------------
    def contains(self, x: Sequence, strict: bool = False) -> bool:
        if len(x) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        if self.empty:
            return False
        x = qvec(x)
        for normal, offset in self.inequalities:
            v = dot(normal, x)
            if strict:
                if v <= offset:
                    return False
            elif v < offset:
                return False
        return True

    def __contains__(self, x) -> bool:
        return self.contains(x)

    @property
    def is_homogeneous(self) -> bool:
        return all(b == 0 for _, b in self.inequalities)

    def intersect(self, other: "HPolyhedron", prune: bool = False) -> "HPolyhedron":
        if self.dim != other.dim:
            raise DimensionMismatch(f"cannot intersect dims {self.dim} and {other.dim}")
        out = HPolyhedron(self.dim, self.inequalities + other.inequalities,
                          empty=self.empty or other.empty)
        return out.pruned() if prune else out

    __and__ = intersect

    def canonical_rows(self) -> frozenset:
        """Set of coprime-integer inequalities; identifies systems up to row scaling."""
        return frozenset(_canon(a, b) for a, b in self.inequalities)

    def pruned(self) -> "HPolyhedron":
        """Irredundant system (facets + equalities as inequality pairs)."""
        if self.is_empty:
            return HPolyhedron.empty_set(self.dim)
        return self.to_v().to_h()

    # -- conversions ---------------------------------------------------
    @cached_property
    def _v(self) -> "VPolyhedron":
        return h_to_v(self)

    def to_v(self) -> "VPolyhedron":
        return self._v

    @property
    def is_empty(self) -> bool:
        return self.empty or self._v.is_empty

    @property
    def is_bounded(self) -> bool:
        v = self._v
        return not v.rays and not v.lines

    def affine_dim(self) -> int:
        return self._v.affine_dim()

    def substitute(self, fixed: Sequence, keep: int | None = None) -> "HPolyhedron":
        """Fix the trailing ``len(fixed)`` coordinates; result lives in the leading ones."""
        fixed = qvec(fixed)
        keep = self.dim - len(fixed) if keep is None else keep
        if keep + len(fixed) != self.dim or keep < 1:
            raise DimensionMismatch("substitution does not fit the dimension")
        ineqs = []
        for a, b in self.inequalities:
            ineqs.append((a[:keep], b - dot(a[keep:], fixed)))
        return HPolyhedron(keep, tuple(ineqs), empty=self.empty)

    def project(self, coords: Sequence[int]) -> "HPolyhedron":
        """Exact image under the coordinate projection onto ``coords``."""
        return self._v.project(coords).to_h()

    def scaled(self, k) -> "HPolyhedron":
        k = rat(k)
        if k <= 0:
            raise ValueError("dilation factor must be positive")
        return HPolyhedron(self.dim, tuple((a, k * b) for a, b in self.inequalities), self.empty)

    def vertices(self) -> list:
        return list(self._v.vertices)

    # -- (de)serialisation ------------------------------------------------
    def to_dict(self) -> dict:
        d = {
            "dim": self.dim,
            "ineqs": [{"a": [str(x) for x in a], "b": str(b)} for a, b in self.inequalities],
        }
        if self.empty:
            d["empty"] = True
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "HPolyhedron":
        ineqs = tuple((qvec(r["a"]), rat(r["b"])) for r in d.get("ineqs", []))
        return cls(int(d["dim"]), ineqs, bool(d.get("empty", False)))

    @classmethod
    def from_json(cls, s: str) -> "HPolyhedron":
        return cls.from_dict(json.loads(s))

    def __repr__(self):
        if self.empty:
            return f"HPolyhedron(dim={self.dim}, empty)"
        rows = ", ".join(
            f"{'+'.join(f'{c}*x{i}' for i, c in enumerate(a) if c)}>={b}"
            for a, b in self.inequalities
        )
        return f"HPolyhedron(dim={self.dim}, [{rows}])"


@dataclass(frozen=True, eq=False)
class VPolyhedron:
    """``conv(vertices) + cone(rays) + span(lines)``.

    When the lineality space is non-trivial the "vertices" are points on the
    minimal faces rather than genuine vertices.
    """

    dim: int
    vertices: tuple = ()
    rays: tuple = ()
    lines: tuple = field(default=())

    def __post_init__(self):
        for name in ("vertices", "rays", "lines"):
            vs = tuple(qvec(v) for v in getattr(self, name))
            for v in vs:
                if len(v) != self.dim:
                    raise DimensionMismatch(f"{name} entry {v} has wrong length")
            object.__setattr__(self, name, vs)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    def affine_dim(self) -> int:
        if self.is_empty:
            return -1
        v0 = self.vertices[0]
        rows = [tuple(x - y for x, y in zip(v, v0)) for v in self.vertices[1:]]
        rows += list(self.rays) + list(self.lines)
        return rank(rows) if rows else 0

    def project(self, coords: Sequence[int]) -> "VPolyhedron":
        pick = lambda v: tuple(v[i] for i in coords)
        rays = [pick(r) for r in self.rays]
        lines = [pick(l) for l in self.lines]
        return VPolyhedron(
            len(coords),
            tuple(dict.fromkeys(pick(v) for v in self.vertices)),
            tuple(dict.fromkeys(r for r in rays if any(r))),
            tuple(l for l in lines if any(l)),
        )

    def to_h(self) -> HPolyhedron:
        return v_to_h(self)

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def ray_set(self) -> frozenset:
        return frozenset(primitive(r) for r in self.rays)


def h_to_v(p: HPolyhedron) -> VPolyhedron:
    """Vertices, extreme rays and lineality basis via the homogenised cone."""
    n = p.dim
    if p.empty:
        return VPolyhedron(n)
    rows = [tuple(a) + (-b,) for a, b in p.inequalities]
    rows.append(tuple([Fraction(0)] * n) + (Fraction(1),))
    rays, lines = cone_generators(rows, n + 1)
    vertices, out_rays = [], []
    for r in rays:
        t = r[-1]
        if t > 0:
            vertices.append(tuple(x / t for x in r[:-1]))
        else:
            out_rays.append(r[:-1])
    if not vertices:
        return VPolyhedron(n)
    for l in lines:
        assert l[-1] == 0
    return VPolyhedron(n, tuple(vertices), tuple(out_rays), tuple(l[:-1] for l in lines))


def v_to_h(v: VPolyhedron) -> HPolyhedron:
    """Facet description of a V-polyhedron via the dual cone."""
    n = v.dim
    if v.is_empty:
        return HPolyhedron.empty_set(n)
    gens = [tuple(p) + (Fraction(1),) for p in v.vertices]
    gens += [tuple(r) + (Fraction(0),) for r in v.rays]
    for l in v.lines:
        gens.append(tuple(l) + (Fraction(0),))
        gens.append(tuple(-x for x in l) + (Fraction(0),))
    rays, lines = cone_generators(gens, n + 1)
    ineqs = []
    for a in rays:
        if any(a[:-1]):
            ineqs.append((a[:-1], -a[-1]))
    for a in lines:
        if any(a[:-1]):
            ineqs.append((a[:-1], -a[-1]))
            ineqs.append((tuple(-x for x in a[:-1]), a[-1]))
    return HPolyhedron(n, tuple(ineqs))
