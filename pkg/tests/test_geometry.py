import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anticore.chain import ChainSpec
from anticore.errors import ChainError
from anticore.geometry import (
    diameter,
    find_anticore,
    four_point_delta,
    geometry_report,
    path_product_bound_check,
    triangle_audit,
    _sample_quads,
)
from anticore.itc import inertia_profile, itc_matrix
from oracles import brute_four_point, brute_path_sum, path_graph_metric


@pytest.mark.parametrize("n, omega", [(3, 2), (21, 11), (51, 26), (201, 101)])
def test_anticore_holds(n, omega):
    m = itc_matrix(ChainSpec(n))
    res = find_anticore(m)
    assert (res.index, res.flag) == (omega, True)
    assert res.violations == ()
    assert int(np.argmax(inertia_profile(m))) + 1 == omega


def test_anticore_eleven_spins_reports_offenders():
    # rows 3 and 9 are farther from 8 and 4 than from the center
    m = itc_matrix(ChainSpec(11))
    res = find_anticore(m)
    assert res.flag is False
    assert res.violations == ((3, 8), (9, 4))
    assert res.index == 6
    assert m.d(3, 8) > m.d(3, 6) + 1e-3
    assert int(np.argmax(inertia_profile(m))) + 1 == 6


def test_anticore_even_chain():
    with pytest.raises(ChainError):
        find_anticore(itc_matrix(ChainSpec(6)))


def test_diameter_three_spins():
    val, pair = diameter(itc_matrix(ChainSpec(3)))
    assert val == pytest.approx(math.log(2), abs=1e-14)
    assert pair in ((1, 2), (2, 3), (2, 1), (3, 2))


def test_diameter_two_hundred_one():
    val, pair = diameter(itc_matrix(ChainSpec(201)))
    assert 101 in pair
    assert abs(val - (-2 * math.log(0.63))) <= 0.05


def test_diameter_biased():
    val, _ = diameter(itc_matrix(ChainSpec(3, 1e4)))
    assert val > 8


def _brute_triangle(d):
    n = d.shape[0]
    return [(i + 1, j + 1, k + 1) for i in range(n) for j in range(n) for k in range(n)
            if d[i, k] > d[i, j] + d[j, k] + 1e-12]


def test_triangle_audit_metric_is_clean():
    aud = triangle_audit(path_graph_metric(9))
    assert aud.count == 0 and aud.max_excess == 0.0


@pytest.mark.parametrize("n, bias", [(9, 0.0), (13, 0.0), (7, 50.0)])
def test_triangle_audit_matches_brute_force(n, bias):
    d = itc_matrix(ChainSpec(n, bias)).distance
    aud = triangle_audit(d)
    assert [tuple(r) for r in aud.violations.tolist()] == sorted(_brute_triangle(d))


def test_triangle_audit_skips_infinite():
    d = path_graph_metric(5)
    d[0, 4] = d[4, 0] = math.inf
    assert triangle_audit(d).count == 0


def test_four_point_small_spaces():
    assert four_point_delta(path_graph_metric(3)).delta == 0.0
    r = four_point_delta(path_graph_metric(6))
    assert r.delta == 0.0 and r.exhaustive and r.scanned == 15


@pytest.mark.parametrize("n", [6, 9, 11])
def test_four_point_matches_brute_force(n):
    m = itc_matrix(ChainSpec(n))
    r = four_point_delta(m)
    assert r.delta == pytest.approx(brute_four_point(m.distance), abs=1e-14)
    assert r.delta >= 0.0
    x, y, z, w = (q - 1 for q in r.quadruple)
    d = m.distance
    sums = sorted([d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]])
    assert (sums[2] - sums[1]) / 2 == pytest.approx(r.delta, abs=1e-14)


def test_four_point_report_fields():
    r = four_point_delta(itc_matrix(ChainSpec(21)))
    assert r.exhaustive and r.scanned == math.comb(21, 4) and r.skipped == 0
    assert r.quadruple is not None and r.seed is None
    assert "diagnostic" in r.label


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 100.0))
def test_four_point_scale_covariance(c):
    d = itc_matrix(ChainSpec(9)).distance
    a = four_point_delta(d).delta
    b = four_point_delta(d * c).delta
    assert b == pytest.approx(c * a, rel=1e-12, abs=1e-15)


def test_four_point_sampling_is_seeded():
    d = itc_matrix(ChainSpec(15)).distance
    full = four_point_delta(d)
    a = four_point_delta(d, budget=200, seed=7)
    b = four_point_delta(d, budget=200, seed=7)
    assert not a.exhaustive and a.seed == 7 and a.scanned == 200
    assert a == b
    assert a.delta <= full.delta


def test_sampled_quadruples_are_distinct():
    q = _sample_quads(np.random.default_rng(3), 6, 5000)
    assert np.all(np.diff(q, axis=1) > 0)
    assert q.min() >= 0 and q.max() <= 5
    # every 4-subset of 6 points shows up
    assert len({tuple(r) for r in q.tolist()}) == math.comb(6, 4)


def test_four_point_infinite_skipped():
    d = path_graph_metric(6)
    d[0, 5] = d[5, 0] = math.inf
    r = four_point_delta(d)
    assert r.skipped == math.comb(4, 2)
    assert r.delta == 0.0


@pytest.mark.parametrize("n", [5, 8, 12])
def test_path_bound_exhaustive(n):
    m = itc_matrix(ChainSpec(n))
    amp = m.sqrt_pmax
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        pb = path_product_bound_check(m, i, j, 3)
        assert pb.rhs == pytest.approx(brute_path_sum(amp, i - 1, j - 1, 3), rel=1e-13)
        assert pb.margin >= -1e-10


def test_path_bound_four_segments_brute():
    m = itc_matrix(ChainSpec(7, 5.0))
    pb = path_product_bound_check(m, 1, 6, 4)
    assert pb.rhs == pytest.approx(brute_path_sum(m.sqrt_pmax, 0, 5, 4), rel=1e-13)


def test_path_bound_diagonal_and_center_share():
    m = itc_matrix(ChainSpec(5))
    pb = path_product_bound_check(m, 2, 2)
    assert pb.lhs == pytest.approx(1.0) and pb.rhs >= 1.0
    amp = m.sqrt_pmax
    pb = path_product_bound_check(m, 1, 2)
    assert pb.through_omega == pytest.approx(amp[0, 2] * amp[2, 1], rel=1e-13)
    assert 0 < pb.omega_share < 1


def test_path_bound_rejects_bad_segments():
    m = itc_matrix(ChainSpec(5))
    with pytest.raises(ValueError):
        path_product_bound_check(m, 1, 2, 1)
    with pytest.raises(ChainError):
        path_product_bound_check(m, 0, 2)


def test_geometry_report():
    rep = geometry_report(itc_matrix(ChainSpec(21)))
    assert rep.anticore.index == 11 and rep.anticore.flag
    assert rep.four_point.delta >= 0
    assert rep.infinite_pairs == 0
    assert rep.inertia_profile.shape == (21,)
    even = geometry_report(itc_matrix(ChainSpec(8)))
    assert even.anticore is None
