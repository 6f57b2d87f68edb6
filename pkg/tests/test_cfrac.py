from __future__ import annotations

import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riglab.cfrac import (
    AlphaLinear,
    AlphaOracle,
    CFExpansion,
    alpha_enclosure,
    cf_of_rational,
    cf_value,
    convergents,
    digits_admissible,
    ostrowski_digits,
    ostrowski_linear,
    ostrowski_value,
    qn_alpha_signed,
    sqrt2_growth_holds,
)
from riglab.errors import OutOfRange
from riglab.seq import IndexRule

GOLDEN = CFExpansion(IndexRule.constant(1))
SQRT2 = CFExpansion(IndexRule.constant(2))
LINEAR = CFExpansion(IndexRule.affine(0, 1))
PHI = (math.sqrt(5) - 1) / 2


def test_cf_of_rational_examples():
    assert cf_of_rational(Fr(3, 7)).quotients(2) == [2, 3]
    assert cf_of_rational(Fr(1, 2)).quotients(1) == [2]
    assert cf_of_rational(Fr(5, 8)).quotients(4) == [1, 1, 1, 2]
    with pytest.raises(OutOfRange):
        cf_of_rational(Fr(3, 2))


@given(st.integers(1, 10 ** 9), st.integers(1, 10 ** 9))
def test_cf_roundtrip(a, b):
    x = Fr(min(a, b), max(a, b) + 1)
    cf = cf_of_rational(x)
    qs = cf.quotients(cf.length)
    assert cf_value(qs) == x
    assert qs[-1] >= 2 or qs == [1]


def test_convergent_denominators():
    assert convergents(GOLDEN, 5).q == (1, 1, 2, 3, 5, 8)
    assert convergents(CFExpansion.of([2, 3]), 2).q == (1, 2, 7)
    assert convergents(LINEAR, 3).q == (1, 1, 3, 10)


@pytest.mark.parametrize("cf", [GOLDEN, SQRT2, LINEAR, CFExpansion(IndexRule.affine(3, 2))])
def test_determinant_and_growth(cf):
    c = convergents(cf, 40)
    assert all(c.determinant(n) == (-1) ** (n - 1) for n in range(1, 41))
    assert sqrt2_growth_holds(c.q)


def test_alpha_enclosures():
    e = alpha_enclosure(GOLDEN, 6)
    assert e.width == Fr(1, 8 * 13)
    assert e.lo < Fr(PHI) < e.hi
    e = alpha_enclosure(SQRT2, 4)
    assert e.lo < Fr(math.sqrt(2) - 1) < e.hi
    assert alpha_enclosure(CFExpansion.of([2, 3]), 5).is_point


def test_qn_alpha_signed_golden():
    x = qn_alpha_signed(GOLDEN, 1, 10)
    assert x.hi < 0
    assert abs(float(x.mid) - (PHI - 1)) < 1e-3


def test_ostrowski_zero():
    d = ostrowski_digits(Fr(0), GOLDEN, 8)
    assert d.digits == (0,) * 8


def test_ostrowski_single_base_term():
    oracle = AlphaOracle(GOLDEN)
    t = oracle.abs_theta(2)
    d = ostrowski_digits(t, GOLDEN, 8)
    # |theta_2| is the base of digit omega_3
    assert d.digit_on_base(2) == 1
    assert sum(d.digits) == 1


def test_ostrowski_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        ostrowski_digits(Fr(1), GOLDEN, 4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([GOLDEN, SQRT2, LINEAR]))
def test_ostrowski_roundtrip(k, cf):
    t = Fr(k, 10 ** 6 + 1)
    N = 12
    d = ostrowski_digits(t, cf, N)
    assert d.admissible
    enc = ostrowski_value(d.digits, cf)
    assert enc.contains(t)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=10))
def test_ostrowski_digits_of_linear_form(raw):
    cf = LINEAR
    qs = cf.quotients(len(raw))
    digits = [min(w, a) for w, a in zip(raw, qs)]
    for i in range(len(digits) - 1):
        if digits[i] == qs[i]:
            digits[i + 1] = 0
    assert digits_admissible(digits, qs)
    lin = ostrowski_linear(digits, cf)
    oracle = AlphaOracle(cf)
    if oracle.evaluate_to(lin, Fr(1, 2 ** 40)).hi >= 1:
        return
    d = ostrowski_digits(lin, cf, len(digits))
    assert list(d.digits) == digits


def test_sign_of_exact_zero():
    assert AlphaOracle(GOLDEN).sign(AlphaLinear(0, Fr(0))) == 0
