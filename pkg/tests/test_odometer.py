from __future__ import annotations

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riglab.errors import DepthTooSmall, Overflow, PrefixTooShort
from riglab.exact import CertifiedReal
from riglab.odometer import (
    DyadicWord,
    all_words,
    cocycle_phi,
    digit_sum,
    eigen_cauchy_defect,
    identity_sweep,
    odometer_step,
    radioactivity_check,
)
from riglab.seq import IndexRule, SequenceSpec, generate, prefix_of

ET = generate(SequenceSpec("erdos-taylor", IndexRule.affine(1, 1)), 16)
POW2 = generate(SequenceSpec("multiplicative", IndexRule.constant(2)), 16)


def test_step_examples():
    assert odometer_step((1, 1, 0)).bits == (0, 0, 1)
    assert odometer_step((0, 1, 1)).bits == (1, 1, 1)
    with pytest.raises(Overflow):
        odometer_step((1, 1, 1))


def test_cocycle_examples():
    assert cocycle_phi((1, 0), POW2) == 1
    assert cocycle_phi((1, 1, 0), prefix_of([1, 3, 10])) == 6
    assert cocycle_phi((0, 1, 1), ET) == ET[1]
    with pytest.raises(PrefixTooShort):
        cocycle_phi((1, 1, 0), prefix_of([1, 3]))


def test_digit_sum_examples():
    b = prefix_of([1, 3, 10])
    assert digit_sum((1, 0, 1), b) == 11
    assert digit_sum((0, 0, 0), b) == 0
    assert digit_sum((1,) * 10, ET) < ET[11]


def test_radioactivity_examples():
    w = radioactivity_check((1, 0, 0), prefix_of([1, 2, 4]), 2)
    assert (w.s_after, w.s_before, w.phi) == (2, 1, 1) and w.holds
    w = radioactivity_check((1, 1, 0, 1), prefix_of([1, 3, 10, 41]), 3, t=Fr(2, 7))
    assert (w.s_after - w.s_before, w.phi) == (6, 6) and w.holds
    with pytest.raises(DepthTooSmall):
        radioactivity_check((1, 1, 0, 1), prefix_of([1, 3, 10, 41]), 2)


@settings(max_examples=200)
@given(st.lists(st.integers(0, 1), min_size=2, max_size=16))
def test_coboundary_on_words(bits):
    w = DyadicWord(tuple(bits))
    if all(bits):
        return
    assert cocycle_phi(w, ET) == digit_sum(odometer_step(w), ET) - digit_sum(w, ET)
    assert cocycle_phi(w, ET) > 0


def test_sweep_agrees_with_reference_loop():
    L = 8
    sweep = identity_sweep(ET, L)
    assert sweep.ok and sweep.words == 256
    checks = 0
    for w in all_words(L):
        if all(w.bits):
            continue
        for n in range(w.ell, L + 1):
            assert radioactivity_check(w, ET, n).holds
            checks += 1
    assert checks == sweep.radioactivity_checks


def test_orbit_sum():
    L = 10
    w = DyadicWord((0,) * L)
    total = 0
    for _ in range(2 ** L - 1):
        total += cocycle_phi(w, ET)
        w = odometer_step(w)
    assert all(w.bits)
    assert total == digit_sum(w, ET) == sum(ET.values[:L])


def test_eigen_defect_examples():
    r = eigen_cauchy_defect(ET, Fr(0), 2, 5)
    assert r.window_defect.hi == 0 and all(x.hi == 0 for x in r.partials)
    # t = 1/2 with an odd b_n in the window attains ||b(F) t|| = 1/2, so ||chi - 1|| = 2
    r = eigen_cauchy_defect(ET, Fr(1, 2), 1, 3)
    assert r.window_defect == CertifiedReal.point(Fr(1, 2))
    assert r.chi_defect.hi == 2 and r.chi_defect.lo > Fr(199, 100)


def test_eigen_partials_for_example42_point():
    from riglab.gp import example42_point

    prefix = generate(SequenceSpec("factorial-products", IndexRule.affine(1, 1)), 22)
    pt = example42_point(prefix, "1011001110001011101001")
    r = eigen_cauchy_defect(prefix, pt.t_point, 1, 20, p=2)
    assert r.partials[-1].hi <= Fr(314159, 100000) ** 2 / 3
