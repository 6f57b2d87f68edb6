"""Singular measures on the circle: bit-series laws and the Cantor martingale measure.

Fourier coefficients are returned as :class:`ComplexBall` discs; defects
``||chi_m - 1||_{L^2(mu)} = sqrt(2 - 2 Re mu^(m))`` are certified intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DepthInsufficient, DepthTooLarge, TailNotSummable, WindowTooWide
from .exact import (
    HALF,
    TWO_PI_HI,
    CertifiedReal,
    ComplexBall,
    char_of_rational,
    fixed_point_fraction,
    fixed_to_signed_float,
    format_rational,
    frac_part,
    log_certified,
    parse_rational,
    sin_pi_abs_bracket,
    sqrt_certified,
)
from .gp import cantor_children, super_start
from .ipset import MAX_WINDOW, _check_window, iter_window_subsets, sum_of
from .seq import IndexRule, SequencePrefix, SequenceSpec, generate, ratio_power_tail_bound

MAX_DEPTH = 24
TAIL_SEARCH_LIMIT = 100000


# ---------------------------------------------------------------------------
# bit-series measures


@dataclass
class BitSeriesMeasure:
    """Law of ``sum_n w_n c_n mod 1`` for independent bits with ``P(w_n = 1) = p_n``.

    ``term(n)`` yields ``(c_n, p_n)`` for ``n >= 1``; ``offset_tail(T)`` is an
    upper bound on ``sum_{n > T} c_n`` (exactly 0 past a finite list).
    """

    term: Callable[[int], tuple[Fraction, Fraction]]
    offset_tail: Callable[[int], Fraction]
    length: Optional[int] = None
    label: str = "bitseries"

    @classmethod
    def finite(cls, offsets: Sequence, probs: Sequence) -> "BitSeriesMeasure":
        cs = [Fraction(c) for c in offsets]
        ps = [Fraction(p) for p in probs]
        if len(cs) != len(ps):
            raise ConfigError("probs", "offsets and probs must have equal length")
        for c in cs:
            if not 0 < c < 1:
                raise ConfigError("offsets", "offsets must lie in (0, 1)")
        for p in ps:
            if not 0 < p < 1:
                raise ConfigError("probs", "probabilities must lie in (0, 1)")
        suffix = [Fraction(0)] * (len(cs) + 1)
        for i in range(len(cs) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + cs[i]

        def term(n):
            return cs[n - 1], ps[n - 1]

        def tail(T):
            return suffix[min(T, len(cs))]

        return cls(term, tail, len(cs), "bitseries")

    @classmethod
    def example42(cls) -> "BitSeriesMeasure":
        """``c_n = 1/(n+1)!`` with fair bits; ``sum_{n > T} c_n <= 2/(T+2)!``."""

        def term(n):
            return Fraction(1, math.factorial(n + 1)), HALF

        def tail(T):
            return Fraction(2, math.factorial(T + 2))

        return cls(term, tail, None, "example42")

    @classmethod
    def from_json(cls, doc: Any) -> "BitSeriesMeasure":
        if doc.get("kind") == "example42":
            return cls.example42()
        offsets, probs = doc.get("offsets"), doc.get("probs")
        if not isinstance(offsets, list):
            raise ConfigError("offsets", "expected a list of rationals")
        if not isinstance(probs, list):
            raise ConfigError("probs", "expected a list of rationals")
        try:
            return cls.finite([parse_rational(c) for c in offsets], [parse_rational(p) for p in probs])
        except ValueError as exc:
            raise ConfigError("offsets", str(exc)) from None


def _tail_index(mu: BitSeriesMeasure, m: int, prec: int) -> int:
    """Smallest ``T`` with ``2 * 2 pi |m| * offset_tail(T) <= 2**-(prec+1)``."""
    if m == 0:
        return 0
    target = Fraction(1, 1 << (prec + 1))
    T = 0
    while True:
        if mu.length is not None and T >= mu.length:
            return mu.length
        if 2 * TWO_PI_HI * abs(m) * mu.offset_tail(T) <= target:
            return T
        T += 1
        if T > TAIL_SEARCH_LIMIT:
            raise TailNotSummable(f"no truncation index up to {TAIL_SEARCH_LIMIT} certifies 2^-{prec}")


def fourier_bitseries(mu: BitSeriesMeasure, m: int, prec: int = 64) -> ComplexBall:
    """``mu^(m) = prod_n ((1 - p_n) + p_n e^{2 pi i m c_n})`` truncated with a certified tail.

    The tail factor product differs from 1 by at most
    ``exp(s) - 1 <= 2 s`` with ``s = sum_{n>T} 2 pi p_n |m| c_n <= 1``.
    """
    if prec < 1:
        raise ConfigError("prec", "prec must be >= 1")
    T = _tail_index(mu, m, prec)
    work = prec + 8 + max(T, 1).bit_length()
    z = ComplexBall.one()
    for n in range(1, T + 1):
        c, p = mu.term(n)
        x = frac_part(m * c)
        if x == 0:
            continue
        ch = char_of_rational(x, work)
        factor = ComplexBall(1 - p + p * ch.re, p * ch.im, p * ch.err)
        z = (z * factor).rounded(work)
    tail = 2 * TWO_PI_HI * abs(m) * mu.offset_tail(T) if T < (mu.length or T + 1) else Fraction(0)
    return ComplexBall(z.re, z.im, z.err + tail)


def defect_from_fourier(z: ComplexBall) -> CertifiedReal:
    """``sqrt(2 - 2 Re z)`` for a coefficient disc of a probability measure."""
    re = z.real_part()
    lo = max(Fraction(0), 2 - 2 * min(re.hi, Fraction(1)))
    hi = min(Fraction(4), 2 - 2 * max(re.lo, Fraction(-1)))
    return CertifiedReal(sqrt_certified(lo).lo, sqrt_certified(hi).hi)


def convolution_power_fourier(z: ComplexBall, Kpow: int) -> ComplexBall:
    """``mu^(m)**K``, the coefficient of the K-fold convolution power."""
    if Kpow < 1:
        raise ConfigError("K", "K must be >= 1")
    return z.power(Kpow)


# ---------------------------------------------------------------------------
# Cantor martingale measure


@dataclass
class CantorMartingaleMeasure:
    """Binary tree of nested intervals ``I_{k,n}`` with barycentric branch weights.

    Level ``j = 1..d`` lives at stage ``n = N0 + j``.  ``k[j]`` lists the
    centres ``k_n`` of the ``2**j`` nodes in address order (bit j selects the
    j-th choice, most significant first), ``pnum[j]`` their probabilities as
    integers over ``den[j]``.
    """

    prefix: SequencePrefix
    N0: int
    root: int
    depth: int
    k: list[list[int]] = field(default_factory=list)
    pnum: list[list[int]] = field(default_factory=list)
    den: list[int] = field(default_factory=list)

    def stage(self, level: int) -> int:
        return self.N0 + level

    def b(self, level: int) -> int:
        return self.prefix[self.N0 + level]

    def leaves(self) -> tuple[list[int], list[int], int, int]:
        """``(k, pnum, den, b)`` at the deepest level."""
        d = self.depth
        return self.k[d], self.pnum[d], self.den[d], self.b(d)

    def leaf_probabilities(self) -> list[Fraction]:
        ks, pn, D, _ = self.leaves()
        return [Fraction(p, D) for p in pn]

    def branch_probability(self, level: int, index: int) -> Fraction:
        """``p(1)`` at node ``index`` of ``level`` (``1 <= level < depth``)."""
        ratio = self.den[level + 1] // self.den[level]
        return Fraction(self.pnum[level + 1][2 * index + 1], ratio * self.pnum[level][index])


def barycentric_p1(x: Fraction, x0: Fraction, x1: Fraction) -> Fraction:
    """``p(1)`` with ``x0 p(0) + x1 p(1) = x`` and ``p(0) + p(1) = 1``."""
    return (Fraction(x) - Fraction(x0)) / (Fraction(x1) - Fraction(x0))


def build_cantor(prefix: SequencePrefix, depth: int) -> CantorMartingaleMeasure:
    if depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {depth} exceeds {MAX_DEPTH}")
    if depth < 1:
        raise ConfigError("depth", "depth must be >= 1")
    n0 = super_start(prefix)
    if n0 + depth + 1 > len(prefix):
        raise DepthInsufficient(f"depth {depth} from stage {n0} needs b up to index {n0 + depth + 1}")
    root = prefix[n0] // 2
    mu = CantorMartingaleMeasure(prefix, n0, root, depth)
    # level 0 is the virtual root; level 1 splits it evenly
    mu.k.append([root])
    mu.pnum.append([1])
    mu.den.append(1)
    left, right = cantor_children(root, prefix[n0], prefix[n0 + 1], prefix[n0 + 2])
    mu.k.append([left, right])
    mu.pnum.append([1, 1])
    mu.den.append(2)
    for level in range(1, depth):
        n = n0 + level
        bn, bn1, bn2 = prefix[n], prefix[n + 1], prefix[n + 2]
        ks, pn = mu.k[level], mu.pnum[level]
        new_k, new_p = [], []
        # p(1) = (k b_{n+1} - k0 b_n) / ((k1 - k0) b_n), written over 2 b_n
        for k, p in zip(ks, pn):
            k0, k1 = cantor_children(k, bn, bn1, bn2)
            num1 = (k * bn1 - k0 * bn) * (2 // (k1 - k0))
            num0 = 2 * bn - num1
            if not 0 < num1 < 2 * bn:
                raise ArithmeticError("branch probability outside (0, 1)")  # pragma: no cover
            new_k.extend((k0, k1))
            new_p.extend((p * num0, p * num1))
        mu.k.append(new_k)
        mu.pnum.append(new_p)
        mu.den.append(mu.den[level] * 2 * bn)
    return mu


@dataclass
class MartingaleStats:
    stages: list[int]
    mean: list[Fraction]
    delta: list[Fraction]
    delta_bound: list[Fraction]
    cross: dict[tuple[int, int], Fraction]
    calE: list[Fraction]

    @property
    def means_zero(self) -> bool:
        return all(x == 0 for x in self.mean)

    @property
    def cross_zero(self) -> bool:
        return all(x == 0 for x in self.cross.values())

    @property
    def delta_ok(self) -> bool:
        return all(d <= b for d, b in zip(self.delta, self.delta_bound))

    def to_json(self) -> dict:
        return {
            "stages": self.stages,
            "mean": [format_rational(x) for x in self.mean],
            "delta": [format_rational(x) for x in self.delta],
            "delta_bound": [format_rational(x) for x in self.delta_bound],
            "cross_all_zero": self.cross_zero,
            "cross_count": len(self.cross),
            "calE": [format_rational(x) for x in self.calE],
        }


def _xi_numerators(mu: CantorMartingaleMeasure, level: int) -> list[int]:
    """Numerators of ``xi_n = b_n (X_{n+1} - X_n)`` over ``b_{n+1}``, one per level-(level+1) node."""
    bn, bn1 = mu.b(level), mu.b(level + 1)
    parents = mu.k[level]
    return [bn * kc - parents[i >> 1] * bn1 for i, kc in enumerate(mu.k[level + 1])]


def martingale_stats(mu: CantorMartingaleMeasure, max_lag: Optional[int] = None) -> MartingaleStats:
    """Exact moments of ``xi_n`` for the stages with a node level and a child level."""
    d = mu.depth
    levels = list(range(1, d))
    xi = {lv: _xi_numerators(mu, lv) for lv in levels}
    mean, delta, bound, calE = [], [], [], []
    for lv in levels:
        P, D = mu.pnum[lv + 1], mu.den[lv + 1]
        bn1 = mu.b(lv + 1)
        s1 = sum(p * x for p, x in zip(P, xi[lv]))
        s2 = sum(p * x * x for p, x in zip(P, xi[lv]))
        mean.append(Fraction(s1, D * bn1))
        delta.append(Fraction(s2, D * bn1 * bn1))
        bound.append(16 * Fraction(mu.b(lv), bn1) ** 2)
        n = mu.stage(lv)
        calE.append(Fraction(4 * mu.prefix[n], mu.prefix[n + 2]))
    cross = {}
    for i, lv in enumerate(levels):
        for lv2 in levels[i + 1 :]:
            lag = lv2 - lv
            if max_lag is not None and lag > max_lag:
                break
            P, D = mu.pnum[lv2 + 1], mu.den[lv2 + 1]
            shift = lv2 - lv
            a, b2 = xi[lv], xi[lv2]
            s = sum(p * a[j >> shift] * b2[j] for j, p in enumerate(P))
            cross[(mu.stage(lv), lag)] = Fraction(s, D * mu.b(lv + 1) * mu.b(lv2 + 1))
    return MartingaleStats([mu.stage(lv) for lv in levels], mean, delta, bound, cross, calE)


@dataclass
class DefectBound:
    K: int
    bound: CertifiedReal
    literal: CertifiedReal
    delta_sum: Fraction
    calE_sum: Fraction

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "bound": self.bound.to_json(),
            "literal_without_2pi": self.literal.to_json(),
            "delta_sum": format_rational(self.delta_sum),
            "calE_sum": format_rational(self.calE_sum),
        }


def dirichlet_defect_bound(mu: CantorMartingaleMeasure, K: int, infinite: bool = False) -> DefectBound:
    """Upper bound on ``||chi_{b(F)} - 1||_{L^2(mu)}`` over finite ``F`` with ``min F >= K``.

    ``|e^{2 pi i x} - 1| <= 2 pi ||x||`` turns the L^2 bound on the
    nearest-integer residual into ``2 pi (sqrt(2 sum Delta_N) + sum calE_N)``,
    with ``Delta_N <= 16 (b_N/b_{N+1})**2`` and ``calE_N = 4 b_N / b_{N+2}``.
    For the depth-d measure only stages ``N < N0 + d`` contribute (``b_N X``
    is an integer beyond).  With ``infinite=True`` the bound covers the limit
    measure, using the sequence rule for the tail past the prefix.
    """
    first = mu.N0 + 1
    if K < first:
        raise ConfigError("K", f"the bound needs K >= {first} (first stage of the tree)")
    p = mu.prefix
    last = mu.N0 + mu.depth - 1 if not infinite else len(p) - 2
    dsum, esum = Fraction(0), Fraction(0)
    for N in range(K, last + 1):
        dsum += 16 * Fraction(p[N], p[N + 1]) ** 2
        esum += Fraction(4 * p[N], p[N + 2])
    if infinite:
        start = max(K, last + 1)
        t2 = ratio_power_tail_bound(p.spec, start, 2)
        if t2 is None:
            raise TailNotSummable("no tail certificate for the sequence rule")
        dsum += 16 * t2
        esum += 4 * 2 * t2
    root = sqrt_certified(2 * dsum)
    literal = CertifiedReal(root.lo + esum, root.hi + esum)
    bound = CertifiedReal(Fraction(0), TWO_PI_HI * literal.hi)
    return DefectBound(K, bound, literal, dsum, esum)


def fourier_cantor(mu: CantorMartingaleMeasure, m: int, prec: int = 64, tol: Optional[Fraction] = None) -> ComplexBall:
    """``sum_leaves P(leaf) e^{2 pi i m X_leaf}`` for the depth-d measure.

    With ``tol`` the result also covers the limit measure: the added radius
    ``2 pi |m| 8 / b_{N0+d+1}`` must not exceed ``tol``.
    """
    ks, pn, D, B = mu.leaves()
    if m == 0:
        z = ComplexBall.one()
    else:
        g = prec + 8 + len(ks).bit_length()
        scale = 1 << g
        re_acc = im_acc = 0
        err = Fraction(0)
        for k, p in zip(ks, pn):
            ch = char_of_rational(Fraction(m * k % B, B), g).rounded(g)
            wq = (p * scale) // D  # weight rounded down, error < 2^-g
            re_acc += wq * int(ch.re * scale)
            im_acc += wq * int(ch.im * scale)
            err += Fraction(wq, scale) * ch.err
        err += Fraction(len(ks) * 2, scale)
        z = ComplexBall(Fraction(re_acc, scale * scale), Fraction(im_acc, scale * scale), err)
    if tol is not None:
        trunc = TWO_PI_HI * abs(m) * Fraction(8, mu.prefix[mu.N0 + mu.depth + 1])
        if trunc > tol:
            raise DepthInsufficient(f"depth {mu.depth} gives truncation error {float(trunc):.3g} > tol")
        z = ComplexBall(z.re, z.im, z.err + trunc)
    return z


@dataclass
class MonteCarloEstimate:
    re: float
    im: float
    stderr: float
    samples: int
    seed: int
    certified: bool = False

    def to_json(self) -> dict:
        return {"re": repr(self.re), "im": repr(self.im), "stderr": repr(self.stderr), "samples": self.samples, "seed": self.seed, "certified": False}


def fourier_cantor_mc(prefix: SequencePrefix, depth: int, m: int, samples: int, seed: int) -> MonteCarloEstimate:
    """Statistical estimate by sampling root-to-leaf paths (not certified)."""
    rng = np.random.default_rng(seed)
    n0 = super_start(prefix)
    if n0 + depth + 1 > len(prefix):
        raise DepthInsufficient("prefix too short for the requested depth")
    vals = np.empty(samples, dtype=np.complex128)
    u = rng.random((samples, depth))
    for s in range(samples):
        k = prefix[n0] // 2
        for level in range(depth):
            n = n0 + level
            k0, k1 = cantor_children(k, prefix[n], prefix[n + 1], prefix[n + 2])
            if level == 0:
                p1 = 0.5
            else:
                p1 = float(Fraction(k * prefix[n + 1] - k0 * prefix[n], (k1 - k0) * prefix[n]))
            k = k1 if u[s, level] < p1 else k0
        B = prefix[n0 + depth]
        x = float(Fraction(m * k % B, B))
        vals[s] = np.exp(2j * np.pi * x)
    mean = vals.mean()
    stderr = float(np.sqrt(np.var(vals) / samples))
    return MonteCarloEstimate(float(mean.real), float(mean.imag), stderr, samples, seed)


# ---------------------------------------------------------------------------
# window defects


def _certified_sqrt_of_float_interval(lo: float, hi: float) -> CertifiedReal:
    lo_f, hi_f = Fraction(max(lo, 0.0)), Fraction(max(hi, 0.0))
    return CertifiedReal(sqrt_certified(lo_f).lo, sqrt_certified(hi_f).hi)


def cantor_window_defects(mu: CantorMartingaleMeasure, window: Sequence[int]) -> list[tuple[int, CertifiedReal]]:
    """Certified ``||chi_{b(F)} - 1||_{L^2(mu_d)}`` for every nonempty ``F`` in the window.

    Leaves are ``X = k/B``; ``b_j X mod 1`` is stored as a 62-bit fixed-point
    residue, summed over ``F`` with wraparound, and ``4 sin^2(pi x)`` is
    bracketed by the rigorous float kernel.  Returns ``(mask, defect)``.
    """
    W = len(window)
    if W > MAX_WINDOW:
        raise WindowTooWide(f"window width {W} exceeds {MAX_WINDOW}")
    ks, pn, D, B = mu.leaves()
    nleaf = len(ks)
    probs = np.array([p / D for p in pn], dtype=np.float64)
    R = np.empty((W, nleaf), dtype=np.uint64)
    for j, bj in enumerate(window):
        R[j] = np.array([fixed_point_fraction(bj * k % B, B) for k in ks], dtype=np.uint64)
    mask62 = np.uint64((1 << 62) - 1)
    rel = (nleaf + 16) * 2.0 ** -52
    out: list[tuple[int, CertifiedReal]] = []

    def visit(start: int, acc: np.ndarray, mask: int, size: int):
        for j in range(start, W):
            cur = (acc + R[j]) & mask62
            m2 = mask | (1 << j)
            if not cur.any():
                # every b(F) X is an integer: the defect is exactly zero
                out.append((m2, CertifiedReal.point(0)))
                visit(j + 1, cur, m2, size + 1)
                continue
            x = fixed_to_signed_float(cur)
            s_lo, s_hi = sin_pi_abs_bracket(x, (size + 1) * 2.0 ** -62 + 2.0 ** -54)
            lo = float(np.dot(probs, 4.0 * s_lo * s_lo)) * (1 - rel)
            hi = float(np.dot(probs, 4.0 * s_hi * s_hi)) * (1 + rel)
            out.append((m2, _certified_sqrt_of_float_interval(lo, hi)))
            visit(j + 1, cur, m2, size + 1)

    visit(0, np.zeros(nleaf, dtype=np.uint64), 0, 0)
    return out


def ip_defect_measure(mu, prefix: SequencePrefix, N: int, W: int, prec: int = 64) -> CertifiedReal:
    """Enclosure of ``max_F ||chi_{b(F)} - 1||_{L^2(mu)}`` over nonempty ``F`` within ``[N, N+W-1]``."""
    window = _check_window(prefix, N, W)
    if isinstance(mu, CantorMartingaleMeasure):
        vals = [d for _, d in cantor_window_defects(mu, window)]
    elif isinstance(mu, BitSeriesMeasure):
        vals = [defect_from_fourier(fourier_bitseries(mu, sum_of(prefix, F), prec)) for F in iter_window_subsets(N, W)]
    else:
        raise ConfigError("measure", f"unsupported measure type {type(mu).__name__}")
    return CertifiedReal(max(v.lo for v in vals), max(v.hi for v in vals))


# ---------------------------------------------------------------------------
# non-IP-Dirichlet windows of the factorial bit-series measure


@dataclass
class Window42Row:
    N: int
    kappa: int
    ell: int
    defect: CertifiedReal
    mean: CertifiedReal
    second_moment: CertifiedReal

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "kappa": self.kappa,
            "ell": self.ell,
            "defect": self.defect.to_json(),
            "mean": self.mean.to_json(),
            "second_moment": self.second_moment.to_json(),
        }


@dataclass
class Window42Report:
    lam: Fraction
    rows: list[Window42Row]
    two_log_lambda: CertifiedReal
    sqrt_two_log_lambda: CertifiedReal

    def to_json(self) -> dict:
        return {
            "lambda": format_rational(self.lam),
            "rows": [r.to_json() for r in self.rows],
            "two_log_lambda": self.two_log_lambda.to_json(),
            "sqrt_two_log_lambda": self.sqrt_two_log_lambda.to_json(),
        }


def lambda_window(lam: Fraction, N: int) -> tuple[int, int]:
    """``(kappa_N, ell_N)`` bounding the integers strictly between ``lam**N`` and ``lam**(N+1)``."""
    lo, hi = lam ** N, lam ** (N + 1)
    kappa = math.floor(lo) + 1
    ell = math.ceil(hi) - 1
    return kappa, ell


def window42(lam, N_min: int, N_max: int, prec: int = 64) -> Window42Report:
    """Defects of the factorial bit-series measure along ``b(F_N)``, ``F_N = (lam^N, lam^{N+1})``.

    Also encloses ``E sum_{k in F_N} <b_k t>`` and its second moment from
    ``<b_k t> = w_{k+1}/a_{k+1} + theta_k`` with ``0 <= theta_k <= 1/a_{k+1}^2``.
    """
    lam = Fraction(lam)
    if lam <= 1:
        raise ConfigError("lambda", "lambda must exceed 1")
    mu = BitSeriesMeasure.example42()
    kappa_max, ell_max = lambda_window(lam, N_max)
    prefix = generate(SequenceSpec("factorial-products", IndexRule.affine(1, 1)), ell_max + 2)
    rows = []
    for N in range(N_min, N_max + 1):
        kappa, ell = lambda_window(lam, N)
        if ell < kappa:
            continue
        F = list(range(kappa, ell + 1))
        z = fourier_bitseries(mu, sum_of(prefix, F), prec)
        defect = defect_from_fourier(z)
        inv = [Fraction(1, k + 2) for k in F]  # 1/a_{k+1}
        mean_lo = sum((x / 2 for x in inv), Fraction(0))
        theta_max = sum((x * x for x in inv), Fraction(0))
        second_lo = sum((x * x / 4 for x in inv), Fraction(0)) + mean_lo ** 2
        second_hi = second_lo + 2 * theta_max * mean_lo + theta_max ** 2
        rows.append(
            Window42Row(N, kappa, ell, defect, CertifiedReal(mean_lo, mean_lo + theta_max), CertifiedReal(second_lo, second_hi))
        )
    two_log = log_certified(lam) * 2
    return Window42Report(lam, rows, two_log, sqrt_certified(two_log))


def measure_from_json(doc: Any):
    if not isinstance(doc, dict):
        raise ConfigError("measure", "expected a JSON object")
    kind = doc.get("kind")
    if kind in ("bitseries", "example42"):
        return BitSeriesMeasure.from_json(doc)
    if kind == "cantor":
        if "sequence" not in doc:
            raise ConfigError("sequence", "cantor measure needs a sequence")
        spec = SequenceSpec.from_json(doc["sequence"])
        depth = doc.get("depth")
        if not isinstance(depth, int) or isinstance(depth, bool):
            raise ConfigError("depth", "expected an integer depth")
        n = doc.get("n")
        if n is None:
            n = spec.max_length
            if n is None:
                raise ConfigError("n", "an unbounded sequence needs an explicit prefix length 'n'")
        prefix = generate(spec, int(n))
        return build_cantor(prefix, depth)
    raise ConfigError("kind", f"unknown measure kind {kind!r}")
