from __future__ import annotations

import itertools
import math
from fractions import Fraction as Fr

import pytest

from riglab.errors import DepthInsufficient, DepthTooLarge
from riglab.exact import ComplexBall, char_of_rational
from riglab.measure import (
    BitSeriesMeasure,
    barycentric_p1,
    build_cantor,
    cantor_window_defects,
    convolution_power_fourier,
    defect_from_fourier,
    dirichlet_defect_bound,
    fourier_bitseries,
    fourier_cantor,
    fourier_cantor_mc,
    ip_defect_measure,
    lambda_window,
    martingale_stats,
    measure_from_json,
    window42,
)
from riglab.seq import IndexRule, SequenceSpec, generate, prefix_of

SUPER = SequenceSpec("multiplicative", IndexRule.affine(11, 1))


def super_prefix(n=16):
    return generate(SUPER, n)


def test_bitseries_examples():
    mu = BitSeriesMeasure.finite([Fr(1, 2)], [Fr(1, 2)])
    assert fourier_bitseries(mu, 0).contains(1, 0)
    z = fourier_bitseries(mu, 1)
    assert z.contains(0, 0) and z.err == 0
    assert fourier_bitseries(mu, 2) == ComplexBall(Fr(1), Fr(0), Fr(0))


def test_bitseries_matches_atom_sum():
    cs, ps = [Fr(1, 3), Fr(1, 7), Fr(2, 11)], [Fr(1, 2), Fr(1, 3), Fr(3, 4)]
    mu = BitSeriesMeasure.finite(cs, ps)
    for m in (1, 5, 22, 1001):
        re = im = 0.0
        for bits in itertools.product((0, 1), repeat=3):
            pr = math.prod(float(p if b else 1 - p) for b, p in zip(bits, ps))
            x = float(sum(c for b, c in zip(bits, cs) if b))
            re += pr * math.cos(2 * math.pi * m * x)
            im += pr * math.sin(2 * math.pi * m * x)
        z = fourier_bitseries(mu, m, 60)
        assert math.hypot(float(z.re) - re, float(z.im) - im) <= float(z.err) + 1e-12


def test_bitseries_integral_frequencies_give_one():
    mu = BitSeriesMeasure.finite([Fr(1, 2), Fr(1, 6), Fr(1, 24)], [Fr(1, 2)] * 3)
    assert fourier_bitseries(mu, 24) == ComplexBall.one()
    prefix = prefix_of([24, 48, 96, 192])
    assert ip_defect_measure(mu, prefix, 1, 4).hi == 0


def test_dirac_measure_has_zero_defect():
    mu = BitSeriesMeasure.finite([], [])
    prefix = prefix_of([1, 3, 10, 41])
    assert ip_defect_measure(mu, prefix, 1, 4).hi == 0


def test_example42_measure_tail_is_certified():
    mu = BitSeriesMeasure.example42()
    m = math.factorial(30) + math.factorial(12)
    z = fourier_bitseries(mu, m, 64)
    assert z.err <= Fr(1, 2 ** 60)
    assert z.abs_upper() <= 2


def test_barycentric_example():
    p1 = barycentric_p1(Fr(7, 20), Fr(3, 10), Fr(9, 20))
    assert p1 == Fr(1, 3) and 1 - p1 == Fr(2, 3)


def test_cantor_probabilities():
    mu = build_cantor(super_prefix(), 8)
    for level in range(1, mu.depth + 1):
        assert sum(mu.pnum[level]) == mu.den[level]
        assert all(p > 0 for p in mu.pnum[level])
    for level in range(1, mu.depth):
        for i in range(len(mu.k[level])):
            p = mu.branch_probability(level, i)
            assert 0 < p < 1
            ks = mu.k[level + 1][2 * i : 2 * i + 2]
            b, b1 = mu.b(level), mu.b(level + 1)
            assert barycentric_p1(Fr(mu.k[level][i], b), Fr(ks[0], b1), Fr(ks[1], b1)) == p


def test_martingale_identities_exact():
    mu = build_cantor(super_prefix(), 10)
    st = martingale_stats(mu)
    assert st.means_zero and st.cross_zero and st.delta_ok
    assert len(st.cross) == (len(st.stages) * (len(st.stages) - 1)) // 2


def test_depth_limits():
    with pytest.raises(DepthTooLarge):
        build_cantor(super_prefix(40), 25)
    with pytest.raises(DepthInsufficient):
        build_cantor(super_prefix(8), 10)


def test_fourier_cantor_zero_and_bruteforce():
    mu = build_cantor(super_prefix(), 5)
    assert fourier_cantor(mu, 0) == ComplexBall.one()
    ks, pn, D, B = mu.leaves()
    for m in (1, 7, mu.b(2)):
        re = sum(Fr(p, D) * char_of_rational(Fr(m * k, B), 80).re for k, p in zip(ks, pn))
        z = fourier_cantor(mu, m, 60)
        assert abs(z.re - re) <= z.err + Fr(1, 2 ** 70)


def test_fourier_cantor_truncation_radius():
    mu = build_cantor(super_prefix(), 4)
    z = fourier_cantor(mu, 3, 40, tol=Fr(1, 10))
    assert z.err > 0
    with pytest.raises(DepthInsufficient):
        fourier_cantor(mu, 10 ** 12, 40, tol=Fr(1, 10 ** 6))


def test_defect_bound_dominates_enumerated_windows():
    prefix = super_prefix()
    mu = build_cantor(prefix, 10)
    first = mu.N0 + 1
    for N in range(first, first + 6):
        W = min(6, mu.N0 + mu.depth - N + 1)
        enc = ip_defect_measure(mu, prefix, N, W)
        assert enc.hi <= dirichlet_defect_bound(mu, N).bound.hi


def test_defect_bound_decreases():
    mu = build_cantor(super_prefix(), 10)
    bounds = [dirichlet_defect_bound(mu, K).bound.hi for K in range(mu.N0 + 1, mu.N0 + mu.depth + 1)]
    assert all(x >= y for x, y in zip(bounds, bounds[1:]))
    assert bounds[-1] == 0


def test_defect_bound_infinite_tail():
    mu = build_cantor(super_prefix(), 6)
    fin = dirichlet_defect_bound(mu, mu.N0 + 2)
    inf = dirichlet_defect_bound(mu, mu.N0 + 2, infinite=True)
    assert inf.bound.hi > fin.bound.hi > 0


def test_window_defects_match_fourier():
    prefix = super_prefix()
    mu = build_cantor(prefix, 6)
    N = mu.N0 + 1
    window = list(prefix.values[N - 1 : N + 2])
    for mask, d in cantor_window_defects(mu, window):
        m = sum(v for i, v in enumerate(window) if mask >> i & 1)
        ref = defect_from_fourier(fourier_cantor(mu, m, 60))
        assert not d.disjoint(ref)
        assert d.width < Fr(1, 10 ** 6)


def test_convolution_power():
    z = char_of_rational(Fr(1, 7), 60)
    assert convolution_power_fourier(z, 1).contains(z.re, z.im)
    zero = ComplexBall(Fr(0), Fr(0), Fr(0))
    assert convolution_power_fourier(zero, 5) == zero


def test_lambda_window():
    assert lambda_window(Fr(13, 10), 10) == (14, 17)


def test_window42_small_range():
    rep = window42(Fr(13, 10), 10, 12)
    assert all(r.defect.lo >= Fr(1, 10) for r in rep.rows)
    assert abs(float(rep.two_log_lambda.mid) - 2 * math.log(1.3)) < 1e-12
    assert rep.two_log_lambda.width < Fr(1, 2 ** 50)


def test_monte_carlo_is_seeded_and_close():
    prefix = super_prefix()
    mu = build_cantor(prefix, 6)
    m = mu.b(2)
    a = fourier_cantor_mc(prefix, 6, m, 400, seed=5)
    b = fourier_cantor_mc(prefix, 6, m, 400, seed=5)
    assert a == b
    z = fourier_cantor(mu, m, 40)
    assert abs(a.re - float(z.re)) < 6 * a.stderr + 1e-9


def test_measure_json():
    mu = measure_from_json({"kind": "bitseries", "offsets": ["1/2"], "probs": ["1/2"]})
    assert fourier_bitseries(mu, 1).contains(0, 0)
    mu = measure_from_json({"kind": "cantor", "sequence": SUPER.to_json(), "depth": 3, "n": 10})
    assert mu.depth == 3
