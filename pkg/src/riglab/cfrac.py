"""Continued fractions, convergents and Ostrowski numeration.

Conventions: ``alpha = [0; a_1, a_2, ...]``, ``p_0/q_0 = 0/1``,
``p_1/q_1 = 1/a_1`` and ``theta_n = q_n alpha - p_n``, whose sign is
``(-1)**n``.  The Ostrowski digits ``omega_1, omega_2, ...`` of ``t`` in
``[0, 1)`` satisfy ``t = sum_k omega_k |theta_{k-1}|`` (with
``|theta_{-1}| = 1``), so digit ``omega_{j+1}`` multiplies ``|theta_j|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

from .errors import ConfigError, OutOfRange, PrecisionExhausted, RuleDomain
from .exact import CertifiedReal, as_certified, dist_to_int_certified
from .seq import IndexRule, SequencePrefix, SequenceSpec

DEFAULT_REFINE_CAP = 4096


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients ``a_1, a_2, ...`` (finite when the rule is a list)."""

    rule: IndexRule

    def __post_init__(self):
        if self.rule.kind == "explicit-list" and any(a < 1 for a in self.rule.values):
            raise RuleDomain("partial quotients must be >= 1")

    @classmethod
    def of(cls, quotients: Union[Sequence[int], IndexRule]) -> "CFExpansion":
        if isinstance(quotients, IndexRule):
            return cls(quotients)
        return cls(IndexRule.explicit(list(quotients)))

    @property
    def length(self) -> Optional[int]:
        return self.rule.length

    @property
    def is_finite(self) -> bool:
        return self.length is not None

    def a(self, n: int) -> int:
        return self.rule(n)

    def quotients(self, N: int) -> list[int]:
        return [self.rule(n) for n in range(1, N + 1)]

    def to_json(self) -> dict:
        if self.rule.kind == "explicit-list":
            return {"quotients": [str(v) for v in self.rule.values]}
        return {"quotients": self.rule.to_json()}

    @classmethod
    def from_json(cls, doc: Any) -> "CFExpansion":
        if not isinstance(doc, dict) or "quotients" not in doc:
            raise ConfigError("quotients", "CF document needs a 'quotients' field")
        return cls(IndexRule.from_json(doc["quotients"], "quotients"))

    def as_sequence_spec(self) -> SequenceSpec:
        return SequenceSpec("principal-denominators", self.rule)


def cf_of_rational(x) -> CFExpansion:
    """Canonical finite expansion of a rational in (0, 1) (last quotient >= 2)."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise OutOfRange(f"{x} is not in (0, 1)")
    quotients = []
    num, den = x.numerator, x.denominator
    while num:
        a, r = divmod(den, num)
        quotients.append(a)
        den, num = num, r
    return CFExpansion.of(quotients)


def cf_value(quotients: Sequence[int]) -> Fraction:
    """Exact value of ``[0; a_1, ..., a_L]``."""
    value = Fraction(0)
    for a in reversed(quotients):
        value = 1 / (a + value)
    return value


@dataclass(frozen=True)
class Convergents:
    """``p_0..p_N`` and ``q_0..q_N``; indices match the list positions."""

    p: tuple[int, ...]
    q: tuple[int, ...]
    a: tuple[int, ...] = field(default=())

    @property
    def N(self) -> int:
        return len(self.q) - 1

    def determinant(self, n: int) -> int:
        """``p_n q_{n-1} - p_{n-1} q_n`` (equal to ``(-1)**(n-1)``)."""
        return self.p[n] * self.q[n - 1] - self.p[n - 1] * self.q[n]

    def as_prefix(self) -> SequencePrefix:
        """``q_1, ..., q_N`` as a sequence prefix."""
        return SequencePrefix(self.q[1:])


def convergents(cf: CFExpansion, N: int) -> Convergents:
    if N < 1:
        raise ConfigError("n", f"N must be >= 1, got {N}")
    if cf.length is not None and N > cf.length:
        raise RuleDomain(f"expansion has only {cf.length} quotients, {N} requested")
    quotients = cf.quotients(N)
    p, q = [0, 1], [1, quotients[0]]
    for n in range(2, N + 1):
        a = quotients[n - 1]
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return Convergents(tuple(p), tuple(q), tuple(quotients))


def sqrt2_growth_holds(q: Sequence[int]) -> bool:
    """``q_{j+n}**2 * 4 >= 2**n * q_j**2`` for all ``1 <= j < j + n`` in range."""
    for j in range(1, len(q)):
        for n in range(1, len(q) - j):
            if q[j + n] ** 2 * 4 < (1 << n) * q[j] ** 2:
                return False
    return True


def alpha_enclosure(cf: CFExpansion, N: int) -> CertifiedReal:
    """``alpha`` between ``p_{N-1}/q_{N-1}`` and ``p_N/q_N`` (exact for a finite CF at its end)."""
    if N < 2:
        raise ConfigError("n", "alpha_enclosure needs N >= 2")
    if cf.length is not None and N >= cf.length:
        c = convergents(cf, cf.length)
        return CertifiedReal.point(Fraction(c.p[-1], c.q[-1]))
    c = convergents(cf, N)
    x, y = Fraction(c.p[N - 1], c.q[N - 1]), Fraction(c.p[N], c.q[N])
    return CertifiedReal(min(x, y), max(x, y))


def qn_alpha_signed(cf: CFExpansion, n: int, N: int) -> CertifiedReal:
    """Enclosure of ``<q_n alpha> = q_n alpha - p_n`` from ``alpha_enclosure(cf, N)``."""
    if N <= n + 2 and not (cf.length is not None and N >= cf.length):
        raise ConfigError("precision", f"need N > n + 2 (n={n}, N={N})")
    c = convergents(cf, n) if n >= 1 else None
    qn, pn = (c.q[n], c.p[n]) if c else (1, 0)
    return alpha_enclosure(cf, N) * qn - pn


# ---------------------------------------------------------------------------
# exact linear forms in alpha


@dataclass(frozen=True)
class AlphaLinear:
    """The real number ``u * alpha + v`` with integer ``u`` and rational ``v``."""

    u: int
    v: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "u", int(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    def __add__(self, other: "AlphaLinear") -> "AlphaLinear":
        return AlphaLinear(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "AlphaLinear") -> "AlphaLinear":
        return AlphaLinear(self.u - other.u, self.v - other.v)

    def __neg__(self):
        return AlphaLinear(-self.u, -self.v)

    def scale(self, k: int) -> "AlphaLinear":
        return AlphaLinear(self.u * k, self.v * k)

    def mod1(self) -> "AlphaLinear":
        """Drop the integer part of ``v`` (the value changes by an integer)."""
        return AlphaLinear(self.u, self.v - math.floor(self.v))


class AlphaOracle:
    """Lazily refined enclosures of ``alpha`` for one expansion."""

    def __init__(self, cf: CFExpansion, start: int = 16, cap: int = DEFAULT_REFINE_CAP):
        self.cf = cf
        self.cap = cap if cf.length is None else max(cf.length, 2)
        self.M = max(2, min(start, self.cap))
        self._conv: Optional[Convergents] = None
        self._enc: Optional[tuple[int, CertifiedReal]] = None

    def conv(self, N: int) -> Convergents:
        if self._conv is None or self._conv.N < N:
            self._conv = convergents(self.cf, max(N, self.M))
        return self._conv

    def theta(self, n: int) -> AlphaLinear:
        """``theta_n = q_n alpha - p_n`` as an exact linear form (``n >= -1``)."""
        if n == -1:
            return AlphaLinear(0, -1)
        c = self.conv(max(n, 1))
        return AlphaLinear(c.q[n], -c.p[n])

    def abs_theta(self, n: int) -> AlphaLinear:
        t = self.theta(n)
        return t if n % 2 == 0 else -t

    def theta_is_zero(self, n: int) -> bool:
        return self.cf.length is not None and n >= self.cf.length

    def enclosure(self) -> CertifiedReal:
        if self._enc is None or self._enc[0] != self.M:
            self._enc = (self.M, alpha_enclosure(self.cf, self.M))
        return self._enc[1]

    def refine(self) -> bool:
        if self.M >= self.cap:
            return False
        self.M = min(2 * self.M, self.cap)
        return True

    def evaluate(self, x: AlphaLinear, extra: Optional[CertifiedReal] = None) -> CertifiedReal:
        val = self.enclosure() * x.u + x.v
        return val + extra if extra is not None else val

    def evaluate_to(self, x: AlphaLinear, width) -> CertifiedReal:
        """Refine until the enclosure of ``x`` has width at most ``width``."""
        while True:
            val = self.evaluate(x)
            if val.width <= width or not self.refine():
                return val

    def sign(self, x: AlphaLinear, extra: Optional[CertifiedReal] = None) -> int:
        """Sign of ``x + extra`` (``extra`` an interval); raises if undecidable."""
        exact_extra = extra is None or extra.is_point
        while True:
            val = self.evaluate(x, extra)
            if val.lo > 0:
                return 1
            if val.hi < 0:
                return -1
            if val.is_point:
                return 0
            if x.u == 0:
                if exact_extra:
                    return 0
                raise PrecisionExhausted("enclosure straddles a digit boundary")
            if not self.refine():
                raise PrecisionExhausted(f"sign undecided after refining alpha to {self.M} quotients")


def dist_to_int_linear(oracle: AlphaOracle, x: AlphaLinear, width=Fraction(1, 1 << 80)) -> CertifiedReal:
    """Enclosure of ``||u alpha + v||``."""
    return dist_to_int_certified(oracle.evaluate_to(x, width))


# ---------------------------------------------------------------------------
# Ostrowski numeration


@dataclass(frozen=True)
class OstrowskiDigits:
    """Digits ``omega_1..omega_N``; ``digits[k-1]`` is ``omega_k``."""

    digits: tuple[int, ...]
    quotients: tuple[int, ...]
    partial: AlphaLinear = AlphaLinear(0)

    def omega(self, k: int) -> int:
        return self.digits[k - 1]

    def digit_on_base(self, j: int) -> int:
        """The digit multiplying ``|theta_j|``, i.e. ``omega_{j+1}``."""
        return self.digits[j]

    @property
    def admissible(self) -> bool:
        return digits_admissible(self.digits, self.quotients)


def digits_admissible(digits: Sequence[int], quotients: Sequence[int]) -> bool:
    for k, w in enumerate(digits):
        if w < 0 or w > quotients[k]:
            return False
        if w == quotients[k] and k + 1 < len(digits) and digits[k + 1] != 0:
            return False
    return True


TValue = Union[CertifiedReal, AlphaLinear, Fraction, int]


def _split(t: TValue) -> tuple[int, CertifiedReal]:
    if isinstance(t, AlphaLinear):
        return t.u, CertifiedReal.point(t.v)
    return 0, as_certified(t)


def ostrowski_digits(t: TValue, cf: CFExpansion, N: int, cap: int = DEFAULT_REFINE_CAP) -> OstrowskiDigits:
    """Greedy most-significant-first digits of ``t`` in [0, 1).

    ``t`` may be a rational, a rational interval, or an exact linear form in
    ``alpha``.  Each digit is decided by exact sign tests of
    ``residual - c |theta_{k-1}|`` with ``alpha`` refined on demand.
    """
    if N < 1:
        raise ConfigError("n", "N must be >= 1")
    oracle = AlphaOracle(cf, start=max(2 * N + 4, 16), cap=cap)
    tu, tv = _split(t)
    # t in [0, 1)
    if oracle.sign(AlphaLinear(tu), tv) < 0 or oracle.sign(AlphaLinear(tu, -1), tv) >= 0:
        raise OutOfRange("t must lie in [0, 1)")
    if cf.length is not None:
        N = min(N, cf.length + 1)
    quotients = tuple(cf.quotients(min(N, cf.length) if cf.length is not None else N))
    digits: list[int] = []
    acc = AlphaLinear(0)
    for k in range(1, N + 1):
        if oracle.theta_is_zero(k - 1):
            break
        base = oracle.abs_theta(k - 1)
        resid = AlphaLinear(tu) - acc  # plus tv
        ak = quotients[k - 1] if k - 1 < len(quotients) else cf.a(k)
        r_enc = oracle.evaluate(resid, tv)
        b_enc = oracle.evaluate(base)
        guess = 0 if r_enc.hi <= 0 else int(max(r_enc.mid, Fraction(0)) / b_enc.mid)
        c = max(0, min(guess, ak))
        while c > 0 and oracle.sign(resid - base.scale(c), tv) < 0:
            c -= 1
        while c < ak and oracle.sign(resid - base.scale(c + 1), tv) >= 0:
            c += 1
        digits.append(c)
        acc = acc + base.scale(c)
    return OstrowskiDigits(tuple(digits), tuple(quotients[: len(digits)]), acc)


def ostrowski_linear(digits: Sequence[int], cf: CFExpansion) -> AlphaLinear:
    """``sum_k omega_k |theta_{k-1}|`` as an exact linear form."""
    oracle = AlphaOracle(cf, start=len(digits) + 2)
    acc = AlphaLinear(0)
    for k, w in enumerate(digits, start=1):
        if w:
            acc = acc + oracle.abs_theta(k - 1).scale(w)
    return acc


def ostrowski_value(digits: Sequence[int], cf: CFExpansion, M: Optional[int] = None) -> CertifiedReal:
    """Enclosure of the partial value plus the residual ``[0, |theta_{N-1}|)``.

    Any ``t`` whose first ``N`` digits are ``digits`` lies in the returned
    interval.
    """
    N = len(digits)
    M = M or max(2 * N + 8, 16)
    oracle = AlphaOracle(cf, start=M)
    lin = ostrowski_linear(digits, cf)
    part = oracle.evaluate(lin)
    if N == 0:
        tail_hi = Fraction(1)
    elif oracle.theta_is_zero(N - 1):
        tail_hi = Fraction(0)
    else:
        tail_hi = oracle.evaluate(oracle.abs_theta(N - 1)).hi
    return CertifiedReal(part.lo, part.hi + tail_hi)
