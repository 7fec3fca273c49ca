import itertools
from fractions import Fraction as F
from math import factorial

import pytest

from okvol.exactgeom import HPolyhedron, volume
from okvol.toric import (Fan, FanError, FlagSpec, divisor_polytope, flag_valuation, h0_count,
                         hirzebruch, is_big, named_model, p1xp1, projective_space, sections)


def P2():
    return projective_space(2)


def brute_h0(d, box=12):
    n = d.fan.n
    return sum(1 for u in itertools.product(range(-box, box + 1), repeat=n)
               if all(sum(a * b for a, b in zip(u, v)) >= -c for v, c in zip(d.fan.rays, d.coeffs)))


def test_p2_is_valid():
    rep = P2().validate()
    assert rep.ok and rep.smooth and rep.complete and rep.primitive


def test_missing_cone_is_incomplete():
    fan = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2)))
    rep = fan.validate()
    assert not rep.complete and not rep.ok
    with pytest.raises(FanError):
        rep.raise_if_invalid()


def test_non_primitive_ray():
    fan = Fan(2, ((2, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    rep = fan.validate()
    assert not rep.primitive


def test_non_smooth_cone():
    # weighted projective plane P(1,1,2): the cone on (1,0), (-1,-2) has index 2
    fan = Fan(2, ((1, 0), (0, 1), (-1, -2)), ((0, 1), (1, 2), (0, 2)))
    assert not fan.validate().smooth


def test_named_models_are_valid():
    for name in ("P2", "P1xP1", "Hirzebruch:0", "Hirzebruch:2", "P:3"):
        assert named_model(name).validate().ok, name
    with pytest.raises(FanError):
        named_model("Grassmannian")


def test_fan_json_round_trip():
    f = hirzebruch(3)
    g = Fan.from_json(__import__("json").dumps(f.to_dict()))
    assert g.rays == f.rays and g.max_cones == f.max_cones


def test_divisor_polytope_p2():
    d = 4
    p = divisor_polytope(P2().divisor((0, 0, d)))
    expect = HPolyhedron.from_rows([(1, 0, 0), (0, 1, 0), (-1, -1, -d)])
    assert p.pruned().canonical_rows() == expect.canonical_rows()


def test_trivial_divisor_polytope_is_origin():
    p = divisor_polytope(P2().divisor((0, 0, 0)))
    assert p.vertices() == [(0, 0)] and h0_count(P2().divisor((0, 0, 0))) == 1


def test_p1xp1_rectangle():
    a, b = 3, 2
    p = divisor_polytope(p1xp1().divisor((0, 0, a, b)))
    assert sorted(p.vertices()) == [(0, 0), (0, b), (a, 0), (a, b)]


def test_h0_examples():
    assert h0_count(P2().divisor((0, 0, 2))) == 6
    assert h0_count(P2().divisor((0, 0, 10))) == 66
    for d in range(8):
        assert h0_count(P2().divisor((0, 0, d))) == (d + 1) * (d + 2) // 2


@pytest.mark.parametrize("fan,coeffs", [
    (hirzebruch(1), (0, 0, 1, 2)), (hirzebruch(2), (1, 0, 0, 3)), (p1xp1(), (1, 1, 1, 0)),
    (projective_space(3), (0, 0, 0, 3)),
])
def test_h0_against_brute_force(fan, coeffs):
    d = fan.divisor(coeffs)
    assert h0_count(d) == brute_h0(d, 8)


def test_flag_valuation_examples():
    assert flag_valuation((1, 1), P2().divisor((0, 0, 2))) == (1, 1)
    assert flag_valuation((1, 0), p1xp1().divisor((0, 0, 1, 1))) == (1, 0)
    d = P2().divisor((1, 2, 3))
    # the vertex of P_D on the flag cone's two facets has nu = 0
    assert flag_valuation((-1, -2), d) == (0, 0)


def test_flag_valuation_rejects_non_sections():
    with pytest.raises(ValueError):
        flag_valuation((3, 0), P2().divisor((0, 0, 2)))
    with pytest.raises(ValueError):
        flag_valuation((F(1, 2), 0), P2().divisor((0, 0, 2)))
    with pytest.raises(FanError):
        flag_valuation((0, 0), P2().divisor((0, 0, 2)), FlagSpec((0, 0)))


@pytest.mark.parametrize("fan,coeffs", [(P2(), (0, 0, 5)), (hirzebruch(1), (1, 0, 2, 3)),
                                        (p1xp1(), (2, 1, 3, 1))])
def test_flag_valuation_injective_and_nonnegative(fan, coeffs):
    d = fan.divisor(coeffs)
    vals = [flag_valuation(u, d) for u in sections(d)]
    assert len(set(vals)) == len(vals)
    assert all(x >= 0 for v in vals for x in v)


def test_is_big_examples():
    assert is_big(P2().divisor((0, 0, 1)))
    assert not is_big(p1xp1().divisor((0, 0, 1, 0)))
    assert not is_big(P2().divisor((0, 0, 0)))


@pytest.mark.parametrize("fan,coeffs", [(P2(), (0, 0, 1)), (hirzebruch(1), (0, 0, 1, 2)),
                                        (p1xp1(), (0, 0, 1, 2))])
def test_h0_growth_rate(fan, coeffs):
    d = fan.divisor(coeffs)
    n = fan.n
    vol = factorial(n) * volume(d.polytope())
    err = lambda k: abs(F(h0_count(k * d) * factorial(n), k ** n) - vol)
    C = max(err(k) * k for k in range(1, 21))
    assert all(err(k) <= C / k for k in range(21, 51))
