"""Dyadic odometer, the cocycle of a sequence, and finite-depth eigenfunction diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ConfigError, DepthTooSmall, Overflow, PrefixTooShort
from .exact import CertifiedReal, as_certified, dist_to_int_certified, sin_pi_certified
from .ipset import ip_defect_scalar
from .seq import SequencePrefix


@dataclass(frozen=True)
class DyadicWord:
    """A cylinder ``w_1 .. w_L`` of the odometer."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ConfigError("w", "word must have length >= 1")
        if any(b not in (0, 1) for b in bits):
            raise ConfigError("w", "bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "DyadicWord":
        return cls(tuple(int(c) for c in text.strip() if c in "01"))

    def __len__(self):
        return len(self.bits)

    @property
    def ell(self) -> int:
        """Position (1-based) of the first 0."""
        try:
            return self.bits.index(0) + 1
        except ValueError:
            raise Overflow("all-ones word: the carry is not determined") from None

    def __str__(self):
        return "".join(map(str, self.bits))


def _dw(w) -> DyadicWord:
    return w if isinstance(w, DyadicWord) else DyadicWord(tuple(w))


def odometer_step(w) -> DyadicWord:
    """Add one with carry: leading ones become zeros, the first zero becomes one."""
    w = _dw(w)
    ell = w.ell
    return DyadicWord((0,) * (ell - 1) + (1,) + w.bits[ell:])


def cocycle_phi(w, prefix: SequencePrefix) -> int:
    """``b_ell - sum_{k < ell} b_k`` for ``ell`` the first zero of ``w``."""
    ell = _dw(w).ell
    if ell > len(prefix):
        raise PrefixTooShort(f"ell = {ell} beyond prefix length {len(prefix)}")
    return prefix[ell] - sum(prefix.values[: ell - 1])


def digit_sum(w, prefix: SequencePrefix, n: int | None = None) -> int:
    """``sum_{k <= n, w_k = 1} b_k`` (``n`` defaults to the word length)."""
    w = _dw(w)
    n = len(w) if n is None else n
    if n > len(prefix):
        raise PrefixTooShort(f"length {n} beyond prefix length {len(prefix)}")
    return sum(b for bit, b in zip(w.bits[:n], prefix.values) if bit)


@dataclass
class RadioactivityWitness:
    n: int
    ell: int
    s_after: int
    s_before: int
    phi: int

    @property
    def holds(self) -> bool:
        return self.s_after - self.s_before == self.phi

    def to_json(self) -> dict:
        return {"n": self.n, "ell": self.ell, "s_after": str(self.s_after), "s_before": str(self.s_before), "phi": str(self.phi), "holds": self.holds}


def radioactivity_check(w, prefix: SequencePrefix, n: int, t=None) -> RadioactivityWitness:
    """Integer witness of ``X_n(tau w) = e^{2 pi i t phi(w)} X_n(w)``.

    The identity ``s_n(tau w) - s_n(w) = phi(w)`` is independent of ``t``;
    when ``t`` is given the ratio is also checked mod 1 in exact arithmetic.
    It needs every changed bit inside ``[1, n]``, so ``n >= ell(w)``.
    """
    w = _dw(w)
    ell = w.ell
    if n < ell:
        raise DepthTooSmall(f"n = {n} < ell(w) = {ell}")
    if n > len(w) or n > len(prefix):
        raise ConfigError("n", f"n must not exceed the word length {len(w)} and prefix length {len(prefix)}")
    tw = odometer_step(w)
    wit = RadioactivityWitness(n, ell, digit_sum(tw, prefix, n), digit_sum(w, prefix, n), cocycle_phi(w, prefix))
    if t is not None:
        t = Fraction(t)
        if ((wit.s_after - wit.s_before) * t - wit.phi * t) % 1 != 0:
            raise ArithmeticError("phase identity failed")  # pragma: no cover
    return wit


def all_words(L: int) -> Iterable[DyadicWord]:
    for m in range(1 << L):
        yield DyadicWord(tuple((m >> i) & 1 for i in range(L)))


@dataclass
class IdentitySweep:
    L: int
    words: int
    coboundary_failures: int
    radioactivity_checks: int
    radioactivity_failures: int
    orbit_phi_sum: int
    all_ones_sum: int

    @property
    def ok(self) -> bool:
        return self.coboundary_failures == 0 and self.radioactivity_failures == 0 and self.orbit_phi_sum == self.all_ones_sum

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "words": self.words,
            "coboundary_failures": self.coboundary_failures,
            "radioactivity_checks": self.radioactivity_checks,
            "radioactivity_failures": self.radioactivity_failures,
            "orbit_phi_sum": str(self.orbit_phi_sum),
            "all_ones_sum": str(self.all_ones_sum),
            "ok": self.ok,
        }


def identity_sweep(prefix: SequencePrefix, L: int) -> IdentitySweep:
    """Exhaustive check over all ``2**L`` words.

    Words are integers with bit ``i`` holding ``w_{i+1}``, so the odometer is
    ``m -> m + 1`` and ``s_n`` is a masked dot product; the loop-based
    definitions above are the reference these tables are tested against.
    ``n`` ranges over ``ell(w) .. L`` for the radioactivity identity.
    """
    if L < 1:
        raise ConfigError("len", "length must be >= 1")
    if L > len(prefix):
        raise PrefixTooShort(f"length {L} beyond prefix length {len(prefix)}")
    b = [int(x) for x in prefix.values[:L]]
    M = 1 << L
    words = np.arange(M, dtype=np.int64)
    bits = ((words[:, None] >> np.arange(L)) & 1).astype(bool)
    # s_n(w) for every n, as exact Python integers via object arrays
    bobj = np.array(b, dtype=object)
    weighted = np.where(bits, bobj, 0)
    partial = np.cumsum(weighted, axis=1)  # partial[m, n-1] = s_n(w)
    prefix_sums = [0]
    for x in b:
        prefix_sums.append(prefix_sums[-1] + x)
    phi_of_ell = [None] + [b[e - 1] - prefix_sums[e - 1] for e in range(1, L + 1)]
    # ell(w) = 1 + number of trailing ones of m
    inv = ~words & (M - 1)
    ell = np.zeros(M, dtype=np.int64)
    nz = inv != 0
    low = inv[nz] & -inv[nz]
    ell[nz] = np.log2(low).astype(np.int64) + 1
    cob_fail = rad_checks = rad_fail = 0
    orbit = 0
    for m in range(M - 1):
        e = int(ell[m])
        phi = phi_of_ell[e]
        orbit += phi
        after, before = partial[m + 1], partial[m]
        if after[L - 1] - before[L - 1] != phi:
            cob_fail += 1
        diffs = after[e - 1 :] - before[e - 1 :]
        rad_checks += len(diffs)
        rad_fail += int(sum(1 for d in diffs if d != phi))
    return IdentitySweep(L, M, cob_fail, rad_checks, rad_fail, orbit, prefix_sums[L])


@dataclass
class EigenDefect:
    window_defect: CertifiedReal
    chi_defect: CertifiedReal
    partials: list[CertifiedReal]
    p: int

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "window_defect": self.window_defect.to_json(),
            "chi_defect": self.chi_defect.to_json(),
            "partials": [x.to_json() for x in self.partials],
        }


def eigen_cauchy_defect(prefix: SequencePrefix, t, N: int, W: int, p: int = 2) -> EigenDefect:
    """Window defect ``max_F ||b(F) t||``, the matching ``||chi_{b(F)} - 1|| = 2 sin(pi ||b(F) t||)``,
    and the running sums ``sum_{n=N}^{N+j} ||b_n t||^p``."""
    if p not in (1, 2):
        raise ConfigError("p", "p must be 1 or 2")
    t = as_certified(t)
    wd = ip_defect_scalar(prefix, t, N, W)
    s = sin_pi_certified(wd)
    chi = CertifiedReal(max(Fraction(0), 2 * s.lo), 2 * s.hi)
    partials = []
    acc = CertifiedReal.point(0)
    for n in range(N, N + W):
        d = dist_to_int_certified(t * prefix[n])
        acc = acc + (d * d if p == 2 else d)
        partials.append(acc)
    return EigenDefect(wd, chi, partials, p)
