import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from okvol.exactgeom import (DimensionMismatch, HPolyhedron, UnboundedError, VPolyhedron,
                             contains, count_lattice_points, dd_convert, intersect,
                             lattice_points, volume)
from okvol.exactgeom.rational import det, inverse, primitive, rat, rank, solve


def simplex2():
    return HPolyhedron.from_rows([(1, 0, 0), (0, 1, 0), (-1, -1, -1)])


def brute_points(p, lo, hi):
    return [x for x in itertools.product(range(lo, hi + 1), repeat=p.dim) if p.contains(x)]


# -- rationals

def test_rat_parsing():
    assert rat("3/6") == F(1, 2)
    assert rat("-0.25") == F(-1, 4)
    assert rat(0.5) == F(1, 2)
    assert rat(7) == 7
    with pytest.raises(ValueError):
        rat("1/x")


def test_linear_algebra_exact():
    A = [[2, 1], [1, 1]]
    assert det(A) == 1
    assert [list(r) for r in inverse(A)] == [[1, -1], [-1, 2]]
    assert list(solve(A, [3, 2])) == [1, 1]
    assert rank([[1, 2], [2, 4]]) == 1
    assert primitive((F(2, 3), F(4, 3))) == (1, 2)


# -- conversion

def test_simplex_vertices():
    v = dd_convert(simplex2())
    assert sorted(v.vertices) == [(0, 0), (0, 1), (1, 0)]
    assert not v.rays and not v.lines


def test_quadrant_rays():
    v = dd_convert(HPolyhedron.cone([[1, 0], [0, 1]]))
    assert list(v.vertices) == [(0, 0)]
    assert sorted(v.rays) == [(0, 1), (1, 0)]


def test_empty_conversion_is_distinguished():
    p = HPolyhedron.from_rows([(1, 1), (-1, 0)])  # x >= 1, x <= 0
    v = dd_convert(p)
    assert p.is_empty and v.is_empty
    assert volume(p) == 0
    assert lattice_points(p) == []


def test_lineality():
    p = HPolyhedron.from_rows([(1, 0, 0)])  # half plane x >= 0
    v = p.to_v()
    assert len(v.lines) == 1 and not p.is_bounded


def _random_cone(rng, facets=5, dim=3):
    # a pointed cone over a random polygon in the plane z = 1
    while True:
        pts = [(rng.randint(-5, 5), rng.randint(-5, 5), 1) for _ in range(facets + 3)]
        v = VPolyhedron(3, ((0, 0, 0),), tuple(pts), ())
        h = v.to_h().pruned()
        if len(h.inequalities) == facets:
            return h


def test_random_cone_round_trip():
    rng = random.Random(5)
    for _ in range(5):
        h = _random_cone(rng)
        back = dd_convert(dd_convert(h)).pruned()
        assert back.canonical_rows() == h.canonical_rows()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-6, 6)),
                min_size=3, max_size=7))
def test_round_trip_membership(rows):
    p = HPolyhedron.from_rows(rows)
    q = p.to_v().to_h()
    for x in itertools.product([F(k, 2) for k in range(-8, 9, 3)], repeat=2):
        assert p.contains(x) == q.contains(x)


# -- intersection

def test_intersect_gives_simplex():
    quad = HPolyhedron.cone([[1, 0], [0, 1]])
    cap = HPolyhedron.from_rows([(-1, -1, -1)])
    s = intersect(quad, cap)
    assert sorted(s.vertices()) == [(0, 0), (0, 1), (1, 0)]


def test_intersect_disjoint_and_mismatch():
    a = HPolyhedron.from_rows([(1, 1)])
    b = HPolyhedron.from_rows([(-1, 0)])
    assert (a & b).is_empty
    with pytest.raises(DimensionMismatch):
        intersect(a, simplex2())


def test_nef_and_triangle_intersection_membership():
    # polyhedral stand-in: intersect the image triangle with an H-cone and compare
    # membership with the conjunction of both tests
    tri = HPolyhedron.from_rows([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (-1, -1, -1, -1),
                                 (1, 1, 1, 1)])
    cone = HPolyhedron.cone([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    both = tri & cone
    rng = random.Random(1)
    for _ in range(300):
        x = tuple(F(rng.randint(-2, 12), 10) for _ in range(3))
        assert both.contains(x) == (tri.contains(x) and cone.contains(x))


# -- lattice points and volume

def test_lattice_points_examples():
    s = HPolyhedron.simplex(2, 2)
    pts = lattice_points(s)
    assert len(pts) == 6 and pts == sorted(pts)
    assert pts == brute_points(s, -1, 3)
    assert len(lattice_points(HPolyhedron.box([0, 0], [1, 1]))) == 4


def test_lattice_unbounded_errors():
    with pytest.raises(UnboundedError):
        lattice_points(HPolyhedron.cone([[1, 0], [0, 1]]))
    with pytest.raises(UnboundedError):
        volume(HPolyhedron.cone([[1, 0], [0, 1]]))


def test_volume_examples():
    assert volume(simplex2()) == F(1, 2)
    assert volume(HPolyhedron.box([0, 0, 0], [1, 1, 1])) == 1
    flat = HPolyhedron.from_rows([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, -1)])
    assert volume(flat) == 0


def test_volume_matches_monte_carlo():
    p = HPolyhedron.from_rows([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                               (-1, -2, -1, F(-7, 2)), (-3, -1, 0, -5), (0, -1, -3, F(-9, 2))])
    v = float(volume(p))
    lo = np.zeros(3)
    hi = np.array([3.5, 1.75, 1.5])
    rng = np.random.default_rng(0)
    N = 10**6
    x = lo + (hi - lo) * rng.random((N, 3))
    A = np.array([[float(t) for t in a] for a, _ in p.inequalities])
    b = np.array([float(t) for _, t in p.inequalities])
    hit = np.all(x @ A.T >= b, axis=1)
    box = float(np.prod(hi - lo))
    est = box * hit.mean()
    se = box * np.sqrt(hit.mean() * (1 - hit.mean()) / N)
    assert abs(est - v) < 3 * se


def test_contains_examples():
    s = simplex2()
    assert contains(s, (F(1, 3), F(1, 3)), strict=True)
    assert not contains(s, (1, 0), strict=True)
    assert contains(s, (1, 0))
    assert not contains(s, (1, 1))


def polytopes():
    return st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
                              st.integers(-4, 1)), min_size=1, max_size=5).map(
        lambda rows: HPolyhedron.box([-2, -2, -2], [2, 2, 2]) & HPolyhedron.from_rows(rows))


@settings(max_examples=25, deadline=None)
@given(polytopes(), st.sampled_from([1, 2, 3]))
def test_dilate_volume(p, k):
    assert volume(p.scaled(k)) == k ** 3 * volume(p)


@settings(max_examples=25, deadline=None)
@given(polytopes(), st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
                              st.integers(-4, 1)))
def test_volume_monotone(p, row):
    assert volume(p & HPolyhedron.from_rows([row])) <= volume(p)


@settings(max_examples=25, deadline=None)
@given(polytopes())
def test_lattice_points_complete(p):
    pts = lattice_points(p)
    assert all(p.contains(x) for x in pts)
    assert pts == brute_points(p, -2, 2)
    assert count_lattice_points(p) == len(pts)


@settings(max_examples=20, deadline=None)
@given(polytopes())
def test_triangulation_additive(p):
    from okvol.exactgeom import simplex_volume, triangulate
    pieces = triangulate(p)
    assert sum((simplex_volume(s) for s in pieces), F(0)) == volume(p)


def test_json_round_trip():
    p = HPolyhedron.from_rows([(1, F(1, 3), F(-2, 5)), (-1, 0, -1)])
    q = HPolyhedron.from_json(p.to_json())
    assert q.inequalities == p.inequalities and q.dim == p.dim
    d = p.to_dict()
    assert d["dim"] == 2 and d["ineqs"][0]["a"] == ["1", "1/3"] and d["ineqs"][0]["b"] == "-2/5"
