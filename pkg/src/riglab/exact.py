"""Exact rational and certified-interval arithmetic.

Scalars are :class:`fractions.Fraction` values (always in lowest terms with a
positive denominator).  Irrational quantities live in :class:`CertifiedReal`
enclosures, and values of characters ``e^{2 pi i m t}`` live in
:class:`ComplexBall` discs.  Transcendental functions are evaluated with
outward-rounded interval arithmetic at adaptively increased precision.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np
from mpmath.ctx_iv import MPIntervalContext

Rational = Union[int, Fraction]

HALF = Fraction(1, 2)

_RAT_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (decimal integers, optional leading minus)."""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return Fraction(text)
        raise ValueError(f"expected a rational literal string, got {text!r}")
    s = text.strip()
    if not _RAT_RE.match(s):
        raise ValueError(f"malformed rational literal {text!r}")
    value = Fraction(s)
    return value


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# nearest-integer calculus


def nearest_int(x: Rational) -> int:
    """The integer nearest to ``x``; on ties the lesser one (7/2 -> 3)."""
    return math.ceil(Fraction(x) - HALF)


def signed_frac(x: Rational) -> Fraction:
    """``x - nearest_int(x)``, a value in (-1/2, 1/2]."""
    x = Fraction(x)
    return x - nearest_int(x)


def dist_to_int(x: Rational) -> Fraction:
    """Distance from ``x`` to the nearest integer, in [0, 1/2]."""
    return abs(signed_frac(x))


def frac_part(x: Rational) -> Fraction:
    """``x mod 1`` in [0, 1)."""
    x = Fraction(x)
    return x - math.floor(x)


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class CertifiedReal:
    """Closed interval ``[lo, hi]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Rational) -> "CertifiedReal":
        return cls(Fraction(x), Fraction(x))

    @classmethod
    def hull(cls, values: Iterable["CertifiedReal | Rational"]) -> "CertifiedReal":
        los, his = [], []
        for v in values:
            v = as_certified(v)
            los.append(v.lo)
            his.append(v.hi)
        return cls(min(los), max(his))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: "Rational | CertifiedReal") -> bool:
        if isinstance(x, CertifiedReal):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def disjoint(self, other: "CertifiedReal") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def __add__(self, other):
        o = as_certified(other)
        return CertifiedReal(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return CertifiedReal(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-as_certified(other))

    def __rsub__(self, other):
        return as_certified(other) - self

    def __mul__(self, other):
        o = as_certified(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedReal(min(prods), max(prods))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedReal(Fraction(0), max(-self.lo, self.hi))

    def shift_mod1(self) -> "CertifiedReal":
        """Translate by an integer so that ``lo`` lies in [0, 1)."""
        k = math.floor(self.lo)
        return CertifiedReal(self.lo - k, self.hi - k)

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        if self.is_point:
            return f"CertifiedReal({format_rational(self.lo)})"
        return f"CertifiedReal([{float(self.lo):.6g}, {float(self.hi):.6g}])"


def as_certified(x: "CertifiedReal | Rational") -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    return CertifiedReal.point(x)


def dist_to_int_certified(x: CertifiedReal) -> CertifiedReal:
    """Enclosure of the image ``{||y|| : y in [lo, hi]}``."""
    x = as_certified(x)
    if x.width >= 1:
        return CertifiedReal(Fraction(0), HALF)
    dlo, dhi = dist_to_int(x.lo), dist_to_int(x.hi)
    lo, hi = min(dlo, dhi), max(dlo, dhi)
    # an integer or a half-integer strictly inside the interval
    if math.floor(x.hi) > math.floor(x.lo):
        lo = Fraction(0)
    if math.floor(x.hi - HALF) > math.floor(x.lo - HALF):
        hi = HALF
    return CertifiedReal(lo, hi)


# ---------------------------------------------------------------------------
# roots and powers


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of a negative integer")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _root_bounds(x: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    scale = 1 << bits
    num = x.numerator * scale ** k
    lo_int = iroot(num // x.denominator, k)
    hi_int = lo_int + 1
    if lo_int ** k * x.denominator == num:
        hi_int = lo_int
    return Fraction(lo_int, scale), Fraction(hi_int, scale)


def sqrt_certified(x: "CertifiedReal | Rational", bits: int = 64) -> CertifiedReal:
    """Enclosure of the square root of a nonnegative interval."""
    x = as_certified(x)
    if x.lo < 0:
        if x.hi < 0:
            raise ValueError("square root of a negative interval")
        x = CertifiedReal(Fraction(0), x.hi)
    return CertifiedReal(_root_bounds(x.lo, 2, bits)[0], _root_bounds(x.hi, 2, bits)[1])


def pow_certified(x: "CertifiedReal | Rational", p: Rational, bits: int = 64) -> CertifiedReal:
    """Enclosure of ``y**p`` over ``y`` in a nonnegative interval, ``p > 0`` rational."""
    x = as_certified(x)
    p = Fraction(p)
    if p <= 0:
        raise ValueError("exponent must be positive")
    if x.lo < 0:
        raise ValueError("pow_certified needs a nonnegative base")
    if p.denominator == 1:
        return CertifiedReal(x.lo ** p.numerator, x.hi ** p.numerator)
    u, v = p.numerator, p.denominator
    lo = _root_bounds(x.lo ** u, v, bits)[0]
    hi = _root_bounds(x.hi ** u, v, bits)[1]
    return CertifiedReal(lo, hi)


def pow_exact_or_certified(x: Rational, p: Rational, bits: int = 64) -> "Fraction | CertifiedReal":
    """Exact ``x**p`` for integer ``p``; a certified enclosure otherwise."""
    p = Fraction(p)
    if p.denominator == 1 and p > 0:
        return Fraction(x) ** p.numerator
    return pow_certified(x, p, bits)


# ---------------------------------------------------------------------------
# transcendental evaluation

_IV = MPIntervalContext()
_IV_LOCK = threading.Lock()


def _mpf_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    if man == 0:
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return _mpf_to_fraction(a), _mpf_to_fraction(b)


def _pi_bounds() -> tuple[Fraction, Fraction]:
    with _IV_LOCK:
        _IV.prec = 160
        return _iv_bounds(_IV.pi)


PI_LO, PI_HI = _pi_bounds()
PI = CertifiedReal(PI_LO, PI_HI)
TWO_PI_HI = 2 * PI_HI


def sin_certified(x: "CertifiedReal | Rational", bits: int = 64) -> CertifiedReal:
    """Enclosure of ``sin`` over a rational interval."""
    x = as_certified(x)
    with _IV_LOCK:
        _IV.prec = bits + 20
        lo_ = _IV.mpf(x.lo.numerator) / x.lo.denominator
        hi_ = _IV.mpf(x.hi.numerator) / x.hi.denominator
        lo, hi = _iv_bounds(_IV.sin(_IV.mpf([lo_.a, hi_.b])))
    return CertifiedReal(lo, hi)


def sin_pi_certified(x: "CertifiedReal | Rational", bits: int = 64) -> CertifiedReal:
    """Enclosure of ``sin(pi * y)`` over a rational interval of ``y``."""
    x = as_certified(x)
    with _IV_LOCK:
        _IV.prec = bits + 20
        lo_ = _IV.mpf(x.lo.numerator) / x.lo.denominator
        hi_ = _IV.mpf(x.hi.numerator) / x.hi.denominator
        y = _IV.mpf([lo_.a, hi_.b]) * _IV.pi
        lo, hi = _iv_bounds(_IV.sin(y))
    return CertifiedReal(lo, hi)


def log_certified(x: Rational, bits: int = 64) -> CertifiedReal:
    x = Fraction(x)
    with _IV_LOCK:
        _IV.prec = bits + 20
        lo, hi = _iv_bounds(_IV.log(_IV.mpf(x.numerator) / x.denominator))
    return CertifiedReal(lo, hi)


def exp_certified(x: Rational, bits: int = 64) -> CertifiedReal:
    x = Fraction(x)
    with _IV_LOCK:
        _IV.prec = bits + 20
        lo, hi = _iv_bounds(_IV.exp(_IV.mpf(x.numerator) / x.denominator))
    return CertifiedReal(lo, hi)


@dataclass(frozen=True)
class ComplexBall:
    """Complex disc: ``|z - (re + i im)| <= err``.

    Values of characters are approximately unimodular discs; Fourier
    coefficients of probability measures are discs meeting the unit disc.
    """

    re: Fraction
    im: Fraction
    err: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))
        object.__setattr__(self, "err", Fraction(self.err))
        if self.err < 0:
            raise ValueError("negative radius")

    @classmethod
    def one(cls) -> "ComplexBall":
        return cls(Fraction(1), Fraction(0), Fraction(0))

    def abs_upper(self) -> Fraction:
        """Rational upper bound on ``|z|``."""
        return abs(self.re) + abs(self.im) + self.err

    def modulus_bound(self) -> Fraction:
        """Tighter rational upper bound on ``|center|``: sqrt computed outward."""
        return sqrt_certified(self.re ** 2 + self.im ** 2, 64).hi

    def real_part(self) -> CertifiedReal:
        return CertifiedReal(self.re - self.err, self.re + self.err)

    def imag_part(self) -> CertifiedReal:
        return CertifiedReal(self.im - self.err, self.im + self.err)

    def contains(self, re: Rational, im: Rational = 0) -> bool:
        d2 = (Fraction(re) - self.re) ** 2 + (Fraction(im) - self.im) ** 2
        return d2 <= self.err ** 2

    def rounded(self, bits: int) -> "ComplexBall":
        """Snap the center to the grid ``2**-bits`` and widen the radius to match."""
        scale = 1 << bits
        re = Fraction(round(self.re * scale), scale)
        im = Fraction(round(self.im * scale), scale)
        slack = abs(re - self.re) + abs(im - self.im)
        return ComplexBall(re, im, self.err + slack)

    def __mul__(self, other: "ComplexBall") -> "ComplexBall":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        m1, m2 = self.modulus_bound(), other.modulus_bound()
        err = self.err * m2 + other.err * m1 + self.err * other.err
        return ComplexBall(re, im, err)

    def scale(self, c: Rational) -> "ComplexBall":
        c = Fraction(c)
        return ComplexBall(self.re * c, self.im * c, self.err * abs(c))

    def __add__(self, other: "ComplexBall") -> "ComplexBall":
        return ComplexBall(self.re + other.re, self.im + other.im, self.err + other.err)

    def power(self, k: int, bits: int = 96) -> "ComplexBall":
        if k < 0:
            raise ValueError("negative power")
        result = ComplexBall.one()
        base = self
        while k:
            if k & 1:
                result = (result * base).rounded(bits)
            k >>= 1
            if k:
                base = (base * base).rounded(bits)
        return result

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im), "err": format_rational(self.err)}

    def __repr__(self):
        return f"ComplexBall({float(self.re):.6g}{float(self.im):+.6g}i ± {float(self.err):.3g})"


UnitComplexApprox = ComplexBall

_EXACT_CHARS = {
    Fraction(0): (1, 0),
    Fraction(1, 4): (0, 1),
    Fraction(1, 2): (-1, 0),
    Fraction(3, 4): (0, -1),
}


def char_of_rational(x: Rational, prec: int) -> ComplexBall:
    """``e^{2 pi i x}`` for rational ``x`` with radius at most ``2**-prec``."""
    x = frac_part(x)
    if x in _EXACT_CHARS:
        re, im = _EXACT_CHARS[x]
        return ComplexBall(Fraction(re), Fraction(im), Fraction(0))
    target = Fraction(1, 1 << prec)
    wp = prec + 24
    for _ in range(12):
        with _IV_LOCK:
            _IV.prec = wp
            y = 2 * _IV.pi * (_IV.mpf(x.numerator) / x.denominator)
            c_lo, c_hi = _iv_bounds(_IV.cos(y))
            s_lo, s_hi = _iv_bounds(_IV.sin(y))
        re, im = (c_lo + c_hi) / 2, (s_lo + s_hi) / 2
        err = (c_hi - c_lo) / 2 + (s_hi - s_lo) / 2
        if err <= target:
            return ComplexBall(re, im, err)
        wp *= 2
    raise ArithmeticError("interval evaluation failed to converge")  # pragma: no cover


def unit_char(m: int, t: "CertifiedReal | Rational", prec: int) -> ComplexBall:
    """``e^{2 pi i m t}`` for ``t`` in an interval.

    ``m * t`` is reduced mod 1 exactly at the center of ``t``; the width of
    ``t`` contributes ``2 pi |m| (hi - lo) / 2`` to the radius.
    """
    if prec < 1:
        raise ValueError("prec must be >= 1")
    t = as_certified(t)
    if m == 0:
        return ComplexBall.one()
    z = char_of_rational(m * t.mid, prec)
    if t.width:
        z = ComplexBall(z.re, z.im, z.err + PI_HI * abs(m) * t.width)
    return z


# ---------------------------------------------------------------------------
# batch kernel: vectorised sine with a rigorous error budget

_SIN_COEFFS = [(-1) ** k / math.factorial(2 * k + 1) for k in range(12)]
_FLOAT_EPS = 2.0 ** -52


def sin_pi_abs_bracket(x: np.ndarray, input_error: float) -> tuple[np.ndarray, np.ndarray]:
    """Lower/upper bounds of ``sin(pi |x|)`` for float ``|x| <= 1/2``.

    ``input_error`` bounds ``|x - x_true|`` elementwise.  The polynomial is
    the degree-23 Taylor sum (truncation < 1e-20 on [0, pi/2]); rounding of
    at most 40 correctly rounded float operations on terms bounded by
    sinh(pi/2) < 2.4 is below 1e-14, and ``sin`` is 1-Lipschitz, so the
    margin ``pi * input_error + 2e-14`` is conservative.
    """
    y = np.pi * np.abs(x)
    y2 = y * y
    acc = np.full_like(y, _SIN_COEFFS[-1])
    for c in reversed(_SIN_COEFFS[:-1]):
        acc = acc * y2 + c
    s = acc * y
    margin = 3.2 * input_error + 2e-14
    return np.clip(s - margin, 0.0, 1.0), np.clip(s + margin, 0.0, 1.0)


FIXED_BITS = 62
FIXED_MASK = (1 << FIXED_BITS) - 1


def fixed_point_fraction(r: int, B: int) -> int:
    """``floor(2**62 * r / B)`` for ``0 <= r < B``; error below one unit."""
    return (r << FIXED_BITS) // B


def fixed_to_signed_float(R: np.ndarray) -> np.ndarray:
    """Map fixed-point residues mod 2**62 to floats in [-1/2, 1/2)."""
    R = R & np.uint64(FIXED_MASK)
    half = np.uint64(1 << (FIXED_BITS - 1))
    signed = R.astype(np.int64) - np.where(R >= half, np.int64(1 << FIXED_BITS), np.int64(0))
    return signed.astype(np.float64) / float(1 << FIXED_BITS)
