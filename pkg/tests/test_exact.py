from __future__ import annotations

import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from riglab.exact import (
    PI,
    CertifiedReal,
    ComplexBall,
    char_of_rational,
    dist_to_int,
    dist_to_int_certified,
    fixed_point_fraction,
    fixed_to_signed_float,
    format_rational,
    nearest_int,
    parse_rational,
    pow_certified,
    signed_frac,
    sin_pi_abs_bracket,
    sin_pi_certified,
    sqrt_certified,
    unit_char,
)

from conftest import rationals


def test_nearest_int_examples():
    assert nearest_int(Fr(7, 2)) == 3
    assert nearest_int(Fr(0)) == 0
    assert nearest_int(Fr(-5, 3)) == -2
    assert nearest_int(Fr(-7, 2)) == -4


def test_signed_frac_examples():
    assert signed_frac(Fr(7, 2)) == Fr(1, 2)
    assert signed_frac(Fr(1, 3)) == Fr(1, 3)
    assert signed_frac(Fr(-1, 3)) == Fr(-1, 3)


def test_dist_to_int_examples():
    assert dist_to_int(Fr(2, 3)) == Fr(1, 3)
    assert dist_to_int(Fr(5)) == 0
    assert dist_to_int(Fr(7, 2)) == Fr(1, 2)


def test_dist_to_int_certified_examples():
    assert dist_to_int_certified(CertifiedReal.point(Fr(1, 3))) == CertifiedReal.point(Fr(1, 3))
    assert dist_to_int_certified(CertifiedReal(Fr(49, 100), Fr(51, 100))) == CertifiedReal(Fr(49, 100), Fr(1, 2))
    assert dist_to_int_certified(CertifiedReal(Fr(9, 10), Fr(11, 10))) == CertifiedReal(Fr(0), Fr(1, 10))
    assert dist_to_int_certified(CertifiedReal(Fr(0), Fr(3))) == CertifiedReal(Fr(0), Fr(1, 2))


@given(rationals)
@example(Fr(1, 2))
@example(Fr(-1, 2))
def test_signed_frac_range_and_norm(x):
    s = signed_frac(x)
    assert -Fr(1, 2) < s <= Fr(1, 2)
    assert abs(s) == dist_to_int(x)
    assert nearest_int(x) + s == x


@given(rationals, st.integers(-1000, 1000))
def test_dist_to_int_periodic_and_even(x, k):
    assert dist_to_int(x + k) == dist_to_int(x)
    assert dist_to_int(-x) == dist_to_int(x)


@given(rationals, rationals, st.integers(0, 20))
def test_dist_certified_sound(a, b, j):
    lo, hi = min(a, b), max(a, b)
    enc = dist_to_int_certified(CertifiedReal(lo, hi))
    y = lo + (hi - lo) * Fr(j, 20)
    assert enc.contains(dist_to_int(y))


def test_rational_text_roundtrip():
    for text in ["3/7", "-5", "0", "12345678901234567890/7"]:
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("6/4") == Fr(3, 2)
    for bad in ["1.5", "a/b", "1/0", "", "--1"]:
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational(bad)


def test_pi_enclosure():
    assert abs(float(PI.mid) - math.pi) < 1e-15
    assert PI.contains(Fr(355, 113)) is False
    assert PI.width < Fr(1, 2 ** 100)


def test_sqrt_and_pow_enclose():
    r = sqrt_certified(Fr(2))
    assert r.lo ** 2 <= 2 <= r.hi ** 2
    assert r.width < Fr(1, 2 ** 60)
    q = pow_certified(Fr(8), Fr(1, 3))
    assert q.contains(2)


def test_unit_char_examples():
    z = unit_char(0, Fr(1, 7), 10)
    assert z.contains(1, 0) and z.err <= Fr(1, 2 ** 10)
    z = unit_char(1, CertifiedReal.point(Fr(1, 2)), 20)
    assert z.contains(-1, 0) and z.err <= Fr(1, 2 ** 20)
    z = unit_char(4, CertifiedReal.point(Fr(1, 8)), 20)
    assert z.contains(-1, 0) and z.err <= Fr(1, 2 ** 20)


def test_char_matches_float():
    for x in [Fr(1, 3), Fr(2, 7), Fr(-5, 11), Fr(10 ** 30 + 1, 10 ** 30)]:
        z = char_of_rational(x, 60)
        assert abs(float(z.re) - math.cos(2 * math.pi * float(x))) < 1e-12
        assert abs(float(z.im) - math.sin(2 * math.pi * float(x))) < 1e-12
        assert z.err <= Fr(1, 2 ** 60)


@settings(max_examples=50)
@given(st.integers(-50, 50), st.integers(-50, 50), rationals)
def test_unit_char_multiplicative(m, n, t):
    prec = 40
    zmn = unit_char(m + n, t, prec)
    prod = unit_char(m, t, prec) * unit_char(n, t, prec)
    d2 = (zmn.re - prod.re) ** 2 + (zmn.im - prod.im) ** 2
    assert d2 <= (zmn.err + prod.err) ** 2


def test_unit_char_interval_radius():
    t = CertifiedReal(Fr(1, 3), Fr(1, 3) + Fr(1, 10 ** 6))
    z = unit_char(5, t, 30)
    for y in [t.lo, t.hi, t.mid]:
        c, s = math.cos(2 * math.pi * 5 * float(y)), math.sin(2 * math.pi * 5 * float(y))
        # the chord at the endpoints is just below the radius; allow float noise
        assert math.hypot(c - float(z.re), s - float(z.im)) <= float(z.err) + 1e-12


def test_complex_ball_power_contains_true_power():
    z = char_of_rational(Fr(1, 5), 60)
    p = z.power(5)
    assert p.contains(1, 0)
    assert z.power(1).contains(z.re, z.im)
    assert ComplexBall(Fr(0), Fr(0), Fr(0)).power(3) == ComplexBall(Fr(0), Fr(0), Fr(0))


def test_sin_pi_certified_contains_float():
    for x in [Fr(1, 6), Fr(1, 3), Fr(2, 5)]:
        s = sin_pi_certified(x)
        assert s.lo - Fr(1, 10 ** 15) <= Fr(math.sin(math.pi * float(x))) <= s.hi + Fr(1, 10 ** 15)
    assert sin_pi_certified(Fr(1, 6)).contains(Fr(1, 2))


def test_sin_bracket_kernel_brackets_exact_values():
    xs = [Fr(k, 997) for k in range(-498, 499)]
    arr = np.array([float(x) for x in xs])
    lo, hi = sin_pi_abs_bracket(arr, 2.0 ** -54)
    for x, a, b in zip(xs, lo, hi):
        s = sin_pi_certified(abs(x), 80)
        assert Fr(float(a)) <= s.lo and s.hi <= Fr(float(b))


@given(st.integers(1, 10 ** 30), st.integers(0, 10 ** 30))
def test_fixed_point_roundtrip(B, r):
    r = r % B
    R = fixed_point_fraction(r, B)
    x = fixed_to_signed_float(np.array([R], dtype=np.uint64))[0]
    true = Fr(r, B)
    true = true - 1 if true >= Fr(1, 2) else true
    assert abs(Fr(float(x)) - true) <= Fr(1, 2 ** 52)
