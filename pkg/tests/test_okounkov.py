import itertools
import random
from fractions import Fraction as F

import pytest

from okvol.exactgeom import HPolyhedron, volume
from okvol.logcone import certify_log_concavity
from okvol.okounkov import (SeriesError, SeriesSpec, direct_vol_estimate, fiber_dimension,
                            fiber_report, fit_rate_constant, okounkov_cone, semigroup_fibre,
                            slice, subseries, support, vol_sequence, volfn,
                            volfn_ex)
from okvol.toric import flag_valuation, hirzebruch, p1xp1, projective_space, sections


def p2_series():
    fan = projective_space(2)
    return SeriesSpec(fan, (fan.divisor((0, 0, 1)),))


def p1p1_series():
    fan = p1xp1()
    return SeriesSpec(fan, (fan.divisor((0, 0, 1, 0)), fan.divisor((0, 0, 0, 1))))


def half_subcone():
    return HPolyhedron.cone([[1, 0, 0], [0, 1, 0], [-2, -2, 1]])


def test_p2_cone():
    c = okounkov_cone(p2_series())
    want = HPolyhedron.cone([[1, 0, 0], [0, 1, 0], [-1, -1, 1]])
    assert c.cone.pruned().canonical_rows() == want.canonical_rows()
    assert volume(slice(c, [1])) == F(1, 2)
    assert volume(slice(c, [2])) == 2


def test_p1p1_cone():
    c = okounkov_cone(p1p1_series())
    want = HPolyhedron.cone([[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1]])
    assert c.cone.pruned().canonical_rows() == want.canonical_rows()


def test_non_big_divisor_rejected_on_request():
    fan = p1xp1()
    with pytest.raises(SeriesError):
        SeriesSpec(fan, (fan.divisor((0, 0, 1, 0)), fan.divisor((0, 0, 0, 1))), require_big=True)
    with pytest.raises(SeriesError):
        SeriesSpec(fan, (fan.divisor((0, 0, 1, 0)),))


def test_slice_edge_cases():
    c = okounkov_cone(p2_series())
    assert slice(c, [0]).vertices() == [(0, 0)]
    assert slice(c, [-1]).is_empty


def test_volfn_examples():
    c = okounkov_cone(p2_series())
    assert [volfn(c, [d]) for d in range(1, 6)] == [1, 4, 9, 16, 25]
    c2 = okounkov_cone(p1p1_series())
    for a, b in [(1, 1), (2, 3), (F(1, 2), 5)]:
        assert volfn(c2, [a, b]) == 2 * a * b
    assert volfn(c2, [0, 3]) == 0
    assert volfn_ex(c2, [0, 3]).status == "boundary"
    assert volfn_ex(c2, [-1, 3]).status == "outside"
    assert volfn_ex(c2, [1, 3]).status == "interior"


def test_direct_estimate_examples():
    s = p2_series()
    assert direct_vol_estimate(s, [1], 10) == F(33, 25)
    assert direct_vol_estimate(s, [1], 1) == 6
    for d in range(1, 6):
        k = 7
        want = F(d * d) * (1 + F(3, d * k) + F(2, (d * k) ** 2))
        assert direct_vol_estimate(s, [d], k) == want


def test_estimate_rate():
    s = p1p1_series()
    seq = vol_sequence(s, [1, 2], range(1, 11))
    C = fit_rate_constant(seq, 4)
    for k, a in vol_sequence(s, [1, 2], range(11, 31)):
        assert abs(a - 4) <= C / k


def test_cone_slices_match_valuations():
    for s in (p2_series(), p1p1_series()):
        c = okounkov_cone(s)
        for m in itertools.product(range(0, 5), repeat=s.rho):
            d = s.divisor_at(m)
            nus = {flag_valuation(u, d) for u in sections(d)}
            assert set(semigroup_fibre(c, m)) == nus


def test_support():
    assert support(okounkov_cone(p2_series())).canonical_rows() == HPolyhedron.cone([[1]]).canonical_rows()
    sub = subseries(p2_series(), half_subcone())
    assert support(sub).pruned().canonical_rows() == HPolyhedron.cone([[1]]).canonical_rows()


def test_support_of_halfspace_subcone():
    s = p1p1_series()
    # restrict to m_1 >= m_2
    sub_cone = okounkov_cone(s).cone & HPolyhedron.cone([[0, 0, 1, -1]])
    sub = subseries(s, sub_cone)
    supp = support(sub)
    rng = random.Random(0)
    for _ in range(200):
        m = (F(rng.randint(-10, 10), 3), F(rng.randint(-10, 10), 3))
        assert supp.contains(m) == (m[0] >= m[1] >= 0)


def test_subseries_full_cone_matches_complete():
    s = p2_series()
    sub = subseries(s, okounkov_cone(s).cone)
    for m in range(6):
        from okvol.toric import h0_count
        assert fiber_dimension(sub, [m]) == h0_count(s.divisor_at([m]))


def test_half_height_subcone():
    sub = subseries(p2_series(), half_subcone())
    for m in range(1, 9):
        assert volfn(sub, [m]) == F(m * m, 4)
    for m in range(0, 13):
        rep = fiber_report(sub, [m])
        assert rep.lattice_points == rep.sections == fiber_dimension(sub, [m])
        assert rep.saturation_gap == 0


def test_subseries_errors():
    s = p2_series()
    with pytest.raises(SeriesError, match="violating"):
        subseries(s, HPolyhedron.cone([[1, 0, 0], [0, 1, 0], [-1, -1, 2]]))
    flat = HPolyhedron.cone([[1, 0, 0], [0, 1, 0], [-1, -1, 1], [1, 1, -1]])
    with pytest.raises(SeriesError, match="interior"):
        subseries(s, flat)


def test_homogeneity_exact():
    c = okounkov_cone(SeriesSpec(hirzebruch(1), (hirzebruch(1).divisor((0, 0, 1, 0)),
                                                  hirzebruch(1).divisor((0, 0, 1, 1)))))
    rng = random.Random(3)
    for _ in range(10):
        m = (F(rng.randint(1, 9), 2), F(rng.randint(1, 9), 3))
        t = F(rng.randint(1, 7), rng.randint(1, 5))
        assert volfn(c, [t * x for x in m]) == t ** 2 * volfn(c, m)


def _hirz_series():
    fan = hirzebruch(1)
    return SeriesSpec(fan, (fan.divisor((0, 0, 1, 0)), fan.divisor((0, 0, 1, 1))))


def test_log_concavity_certified():
    c = okounkov_cone(_hirz_series())
    rng = random.Random(4)
    pairs = [tuple((F(rng.randint(1, 30), 7), F(rng.randint(1, 30), 7)) for _ in range(2))
             for _ in range(60)]
    rep = certify_log_concavity(lambda m: volfn(c, m), 2, pairs)
    assert rep.checked == 60 and not rep.violations and rep.max_width <= 1e-12


def test_holder_continuity():
    c = okounkov_cone(_hirz_series())
    rng = random.Random(5)

    def pairs(k):
        out = []
        for _ in range(k):
            v = (F(rng.randint(5, 40), 10), F(rng.randint(5, 40), 10))
            w = tuple(x + F(rng.randint(-5, 5), 50) for x in v)
            out.append((v, w))
        return out

    def ratio(v, w):
        a = float(volfn(c, v)) ** 0.5
        b = float(volfn(c, w)) ** 0.5
        dist = max(abs(float(x - y)) for x, y in zip(v, w))
        return abs(a - b) / dist if dist else 0.0

    k2 = max(ratio(v, w) for v, w in pairs(100)) * 1.5
    assert all(ratio(v, w) <= k2 for v, w in pairs(100))


def test_semigroup_closed_under_addition():
    s = _hirz_series()
    c = okounkov_cone(s)
    for m1, m2 in [((1, 0), (0, 1)), ((1, 1), (2, 1)), ((0, 2), (1, 1))]:
        tot = tuple(a + b for a, b in zip(m1, m2))
        target = set(semigroup_fibre(c, tot))
        for g1 in semigroup_fibre(c, m1):
            for g2 in semigroup_fibre(c, m2):
                assert tuple(a + b for a, b in zip(g1, g2)) in target
