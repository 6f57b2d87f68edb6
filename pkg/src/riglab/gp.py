"""Summability groups ``G_p(b) = {t : sum ||b_n t||**p < inf}`` and certified points in them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cfrac import AlphaLinear, AlphaOracle, CFExpansion, convergents
from .errors import (
    ConfigError,
    DichotomyViolation,
    GapTooSmall,
    IntegerT,
    NotMultiplicative,
    PrefixTooShort,
    RatioConditionFailed,
)
from .exact import (
    HALF,
    PI_LO,
    CertifiedReal,
    as_certified,
    dist_to_int,
    dist_to_int_certified,
    format_rational,
    frac_part,
    pow_certified,
    signed_frac,
)
from .seq import SequencePrefix, is_multiplicative, ratio_power_sum, ratio_power_tail_bound

Number = Union[Fraction, CertifiedReal]

VERDICTS = ("certified-member", "divergence-evidence", "inconclusive")


def _json_num(x: Number):
    return x.to_json() if isinstance(x, CertifiedReal) else format_rational(x)


@dataclass(frozen=True)
class BitWord:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ConfigError("word", "bit word must be nonempty")
        if any(b not in (0, 1) for b in bits):
            raise ConfigError("word", "bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "BitWord":
        if not text or any(ch not in "01" for ch in text):
            raise ConfigError("word", f"expected a string of 0/1, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)


def _word(w) -> BitWord:
    if isinstance(w, BitWord):
        return w
    if isinstance(w, str):
        return BitWord.parse(w)
    return BitWord(tuple(w))


@dataclass
class GpReport:
    p: Fraction
    N: int
    partial: Number
    tail_certificate: Optional[Number] = None
    verdict: str = "inconclusive"

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict}")
        if self.verdict == "certified-member" and self.tail_certificate is None:
            raise ValueError("membership needs a tail certificate")

    @property
    def total_upper(self) -> Optional[Fraction]:
        if self.tail_certificate is None:
            return None
        return as_certified(self.partial).hi + as_certified(self.tail_certificate).hi

    def to_json(self) -> dict:
        return {
            "p": format_rational(self.p),
            "N": self.N,
            "partial": _json_num(self.partial),
            "tail_certificate": None if self.tail_certificate is None else _json_num(self.tail_certificate),
            "verdict": self.verdict,
        }


def _power(x: Number, p: Fraction) -> Number:
    if isinstance(x, Fraction) and p.denominator == 1:
        return x ** p.numerator
    x = as_certified(x)
    if p.denominator == 1:
        return CertifiedReal(x.lo ** p.numerator, x.hi ** p.numerator)
    return pow_certified(x, p)


def _add(a: Number, b: Number) -> Number:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return as_certified(a) + as_certified(b)


def norm_terms(prefix: SequencePrefix, t, N: int, start: int = 1) -> list[Number]:
    """``||b_n t||`` for ``start <= n <= N``; exact for a point ``t``."""
    if N > len(prefix):
        raise PrefixTooShort(f"depth {N} beyond prefix length {len(prefix)}")
    if isinstance(t, CertifiedReal) and not t.is_point:
        return [dist_to_int_certified(t * prefix[n]) for n in range(start, N + 1)]
    x = t.lo if isinstance(t, CertifiedReal) else Fraction(t)
    return [dist_to_int(prefix[n] * x) for n in range(start, N + 1)]


def power_sum(terms: Sequence[Number], p) -> Number:
    p = Fraction(p)
    total: Number = Fraction(0)
    for x in terms:
        total = _add(total, _power(x, p))
    return total


def _evidence_verdict(terms: Sequence[Number]) -> str:
    if len(terms) < 2:
        return "inconclusive"
    h = len(terms) // 2
    first = as_certified(sum((as_certified(x) for x in terms[:h]), CertifiedReal.point(0)))
    second = as_certified(sum((as_certified(x) for x in terms[h:]), CertifiedReal.point(0)))
    if second.lo > 0 and second.lo >= first.hi / 2:
        return "divergence-evidence"
    return "inconclusive"


def gp_partial_sum(prefix: SequencePrefix, t, p, N: int, tail_certificate: Optional[Number] = None) -> GpReport:
    """``sum_{n <= N} ||b_n t||**p``.

    Without an externally supplied tail certificate the verdict is at most
    ``divergence-evidence`` (non-decaying partial sums), except for ``t = 0``.
    """
    p = Fraction(p)
    if p <= 0:
        raise ConfigError("p", "p must be positive")
    t_c = as_certified(t)
    terms = [_power(x, p) for x in norm_terms(prefix, t, N)]
    partial = power_sum(norm_terms(prefix, t, N), p)
    if t_c.is_point and dist_to_int(t_c.lo) == 0:
        return GpReport(p, N, partial, Fraction(0), "certified-member")
    if tail_certificate is not None:
        return GpReport(p, N, partial, tail_certificate, "certified-member")
    return GpReport(p, N, partial, None, _evidence_verdict(terms))


# ---------------------------------------------------------------------------
# multiplicative embedding


@dataclass
class Lemma21Result:
    t: CertifiedReal
    t_point: Fraction
    cert: GpReport
    chain_sum: Fraction
    tail_chain: list[Fraction]
    bound: Fraction = Fraction(4)

    @property
    def within_bound(self) -> bool:
        return as_certified(self.cert.partial).hi <= self.bound and self.chain_sum <= self.bound

    def to_json(self) -> dict:
        return {
            "t": self.t.to_json(),
            "t_point": format_rational(self.t_point),
            "cert": self.cert.to_json(),
            "chain_sum": format_rational(self.chain_sum),
            "bound": format_rational(self.bound),
            "within_bound": self.within_bound,
        }


def multiplicative_ratios(prefix: SequencePrefix) -> list[int]:
    """``a_n = b_n / b_{n-1}`` for ``n >= 1`` (with ``b_0 = 1``), 1-indexed list position n-1."""
    vals = prefix.values
    if not is_multiplicative(vals):
        raise NotMultiplicative("b_n does not divide b_{n+1} somewhere in the prefix")
    return [vals[0]] + [vals[i] // vals[i - 1] for i in range(1, len(vals))]


def _check_nk(nk: Sequence[int], length: int) -> list[int]:
    nk = [int(n) for n in nk]
    if not nk or any(nk[i] >= nk[i + 1] for i in range(len(nk) - 1)) or nk[0] < 1:
        raise ConfigError("nk", "subsequence indices must be strictly increasing and positive")
    if nk[-1] > length:
        raise PrefixTooShort(f"subsequence index {nk[-1]} beyond prefix length {length}")
    return nk


def lemma21_point(prefix: SequencePrefix, nk: Sequence[int], w, N_max: Optional[int] = None) -> Lemma21Result:
    """The point ``t(w) = sum_k w_k / b_{n_k}`` of a multiplicative sequence.

    The enclosure covers every infinite extension of ``w``: the remaining
    terms sum to less than ``1 / (2 b_{n_d})`` under the ratio condition.
    The certificate is exact at the finite point ``t_d`` (zero extension).
    """
    w = _word(w)
    a = multiplicative_ratios(prefix)
    nk = _check_nk(nk, len(prefix))
    if len(w) > len(nk):
        raise ConfigError("word", f"word length {len(w)} exceeds the {len(nk)} subsequence indices")
    for i in range(len(nk) - 1):
        if a[nk[i + 1] - 1] < 3 * a[nk[i] - 1]:
            raise RatioConditionFailed(f"a_{nk[i + 1]} / a_{nk[i]} < 3")
    if any(x < 2 for x in a[1:]):
        raise RatioConditionFailed("a_n >= 2 fails")
    d = len(w)
    t_d = sum((Fraction(bit, prefix[nk[k]]) for k, bit in enumerate(w.bits)), Fraction(0))
    enclosure = CertifiedReal(t_d, t_d + Fraction(1, 2 * prefix[nk[d - 1]]))
    N_max = len(prefix) if N_max is None else N_max
    n1 = nk[0]
    terms = norm_terms(prefix, t_d, N_max, start=n1)
    partial = sum(terms, Fraction(0))
    # b_N t_d is an integer once N >= n_d
    last = max(n for k, n in enumerate(nk[:d]) if w.bits[k]) if any(w.bits) else 0
    if N_max >= last:
        tail = Fraction(0)
    else:
        tail = sum(norm_terms(prefix, t_d, last, start=N_max + 1), Fraction(0))
    cert = GpReport(Fraction(1), N_max, partial, tail, "certified-member")
    # Delta_N = sum over listed n_k > N of b_N / b_{n_k} (n_k = N contributes an integer)
    chain = []
    for N in range(n1, N_max + 1):
        chain.append(sum((Fraction(prefix[N], prefix[n]) for n in nk if n > N), Fraction(0)))
    return Lemma21Result(enclosure, t_d, cert, sum(chain, Fraction(0)), chain)


# ---------------------------------------------------------------------------
# principal denominators


@dataclass
class BlockSum:
    K: int
    lo_index: int
    hi_index: int
    value: CertifiedReal
    scale: Fraction

    @property
    def ratio_upper(self) -> Fraction:
        return self.value.hi / self.scale

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "range": [self.lo_index, self.hi_index],
            "value": self.value.to_json(),
            "scale": format_rational(self.scale),
        }


@dataclass
class Lemma22Result:
    t: CertifiedReal
    linear: AlphaLinear
    terms: list[CertifiedReal]
    blocks: list[BlockSum]
    cumulative: list[CertifiedReal]
    sup_evidence: bool

    @property
    def measured_constant(self) -> Fraction:
        return max((b.ratio_upper for b in self.blocks), default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "t": self.t.to_json(),
            "linear": {"u": str(self.linear.u), "v": format_rational(self.linear.v)},
            "blocks": [b.to_json() for b in self.blocks],
            "cumulative": [c.to_json() for c in self.cumulative],
            "measured_constant_upper": format_rational(self.measured_constant),
            "sup_evidence": self.sup_evidence,
        }


def lemma22_point(cf: CFExpansion, nk: Sequence[int], w, N_max: Optional[int] = None, prec: int = 64) -> Lemma22Result:
    """``t(w) = sum_k w_k <q_{n_k - 1} alpha> mod 1`` and its block sums.

    ``t`` is kept as an exact linear form ``u alpha + v``; then
    ``q_N t = q_N u alpha`` modulo an integer, so every ``||q_N t||`` is an
    enclosure of a single multiple of ``alpha`` reduced mod 1.
    """
    w = _word(w)
    nk = [int(n) for n in nk]
    if not nk or nk[0] < 1 or any(nk[i] >= nk[i + 1] for i in range(len(nk) - 1)):
        raise ConfigError("nk", "subsequence indices must be strictly increasing and positive")
    if len(w) > len(nk):
        raise ConfigError("word", f"word length {len(w)} exceeds the {len(nk)} subsequence indices")
    N_max = N_max or (nk[-1] - 2 if len(nk) > 1 else nk[0])
    conv = convergents(cf, max(N_max + 1, nk[-1]) + 1)
    a = conv.a
    sup_evidence = all(a[nk[i + 1] - 1] > a[nk[i] - 1] for i in range(len(nk) - 1))
    u, v = 0, Fraction(0)
    for k, bit in enumerate(w.bits):
        if bit:
            j = nk[k] - 1
            u += conv.q[j]
            v -= conv.p[j]
    lin = AlphaLinear(u, v).mod1()
    oracle = AlphaOracle(cf, start=max(2 * N_max + 8, 32))
    target = Fraction(1, 1 << prec)
    t_enc = oracle.evaluate_to(lin, target)
    terms = []
    for N in range(1, N_max + 1):
        x = oracle.evaluate_to(AlphaLinear(conv.q[N] * u), target)
        terms.append(dist_to_int_certified(x))
    cumulative = []
    acc = CertifiedReal.point(0)
    for x in terms:
        acc = acc + x
        cumulative.append(acc)
    blocks = []
    for K in range(1, len(nk)):
        lo, hi = nk[K - 1] - 1, nk[K] - 2
        if lo < 1 or hi > N_max or hi < lo:
            continue
        value = sum((terms[N - 1] for N in range(lo, hi + 1)), CertifiedReal.point(0))
        scale = Fraction(1, a[nk[K - 1] - 1]) + Fraction(1, a[nk[K] - 1])
        blocks.append(BlockSum(K, lo, hi, value, scale))
    return Lemma22Result(t_enc, lin, terms, blocks, cumulative, sup_evidence)


# ---------------------------------------------------------------------------
# super-lacunary Cantor points


def super_start(prefix: SequencePrefix, threshold: int = 10) -> int:
    """First ``N0`` with ``b_{n+1}/b_n > threshold`` for every ``n >= N0`` in the prefix and ``b_{N0} >= 2``."""
    vals = prefix.values
    n0 = len(vals)
    while n0 > 1 and vals[n0 - 1] > threshold * vals[n0 - 2]:
        n0 -= 1
    if n0 >= len(vals):
        raise GapTooSmall("the last ratio of the prefix is not > 10")
    if vals[n0 - 1] < 2:
        n0 += 1
    if n0 >= len(vals):
        raise GapTooSmall("no stage with b_n >= 2 and ratio > 10")
    return n0


def cantor_children(k: int, bn: int, bn1: int, bn2: int) -> tuple[int, int]:
    """Nearest centres ``k'/b_{n+1}`` strictly left and right of ``k/b_n``,
    checked admissible (``I_{k',n+1}`` inside ``I_{k,n}``)."""
    x = k * bn1
    left = -(-x // bn) - 1  # largest k' with k'/b_{n+1} < k/b_n
    right = x // bn + 1
    r_parent = Fraction(4, bn1)
    r_child = Fraction(4, bn2)
    centre = Fraction(k, bn)
    for kk in (left, right):
        if abs(Fraction(kk, bn1) - centre) + r_child > r_parent or not 1 <= kk < bn1:
            raise GapTooSmall(f"child {kk}/{bn1} not admissible in I_{{{k},{bn}}}")
    return left, right


def descend(prefix: SequencePrefix, n0: int, bits: Sequence[int]) -> list[int]:
    """``k_{n0}, k_{n0+1}, ...`` for the root ``b_{n0} // 2`` and the given bits."""
    if n0 + len(bits) + 1 > len(prefix):
        raise PrefixTooShort(f"depth {len(bits)} from stage {n0} needs b up to index {n0 + len(bits) + 1}")
    ks = [prefix[n0] // 2]
    for i, bit in enumerate(bits):
        n = n0 + i
        left, right = cantor_children(ks[-1], prefix[n], prefix[n + 1], prefix[n + 2])
        ks.append(right if bit else left)
    return ks


@dataclass
class SuperlacunaryResult:
    t: CertifiedReal
    N0: int
    centres: list[int]
    stage_checks: list[bool]
    cert: GpReport
    total_bound: Optional[Fraction]

    @property
    def all_stages_ok(self) -> bool:
        return all(self.stage_checks)

    def to_json(self) -> dict:
        return {
            "t": self.t.to_json(),
            "N0": self.N0,
            "centres": [str(k) for k in self.centres],
            "stage_checks": self.stage_checks,
            "cert": self.cert.to_json(),
            "total_bound": None if self.total_bound is None else format_rational(self.total_bound),
        }


def superlacunary_point(prefix: SequencePrefix, w, p) -> SuperlacunaryResult:
    """Point of ``E = cap_n E_n`` addressed by ``w``, with a ``G_p`` certificate."""
    w = _word(w)
    p = Fraction(p)
    if p <= 0:
        raise ConfigError("p", "p must be positive")
    n0 = super_start(prefix)
    ks = descend(prefix, n0, w.bits)
    d = len(w)
    nd = n0 + d
    xd = Fraction(ks[-1], prefix[nd])
    r = Fraction(4, prefix[nd + 1])
    t = CertifiedReal(xd - r, xd + r)
    checks = []
    for n in range(n0, nd + 1):
        checks.append(dist_to_int_certified(t * prefix[n]).hi <= Fraction(4 * prefix[n], prefix[n + 1]))
    partial = power_sum(norm_terms(prefix, t, nd), p)
    # beyond stage nd: ||b_n t|| <= 4 b_n / b_{n+1}
    L = len(prefix)
    in_prefix = ratio_power_sum(prefix.values, p, start=nd + 1)
    beyond = ratio_power_tail_bound(prefix.spec, L, p)
    four_p = _power(Fraction(4), p)
    tail = None
    total = None
    if beyond is not None:
        tail = as_certified(in_prefix).hi + beyond
        tail = as_certified(four_p).hi * tail
        head = as_certified(ratio_power_sum(prefix.values, p, start=n0)).hi + beyond
        total = Fraction(n0) * as_certified(_power(HALF, p)).hi + as_certified(four_p).hi * head
    verdict = "certified-member" if tail is not None and all(checks) else "inconclusive"
    cert = GpReport(p, nd, partial, tail, verdict)
    return SuperlacunaryResult(t, n0, ks, checks, cert, total)


# ---------------------------------------------------------------------------
# Erdos-Taylor dichotomy


@dataclass
class DichotomyWitness:
    n: int
    a_n: int
    t: Fraction
    norm_n: Fraction
    premise_threshold: Fraction
    premise: bool
    norm_next: Fraction
    conclusion_threshold: Fraction
    conclusion: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a_n": str(self.a_n),
            "t": format_rational(self.t),
            "norm_n": format_rational(self.norm_n),
            "premise_threshold": format_rational(self.premise_threshold),
            "premise": self.premise,
            "norm_next": format_rational(self.norm_next),
            "conclusion_threshold": format_rational(self.conclusion_threshold),
            "conclusion": self.conclusion,
        }


def et_quotient(prefix: SequencePrefix, n: int) -> int:
    """``a_n`` with ``b_{n+1} = a_n b_n + 1``."""
    a, r = divmod(prefix[n + 1] - 1, prefix[n])
    if r:
        raise ConfigError("spec", f"b_{n + 1} - 1 is not a multiple of b_{n}: not an Erdos-Taylor prefix")
    return a


def et_dichotomy(prefix: SequencePrefix, t, n: int) -> DichotomyWitness:
    """``||b_n t|| < ||t|| / (2 a_n)`` implies ``||b_{n+1} t|| > ||t|| / 2``."""
    t = Fraction(t)
    nt = dist_to_int(t)
    if nt == 0:
        raise IntegerT(f"t = {format_rational(t)} is an integer")
    if n + 1 > len(prefix):
        raise PrefixTooShort(f"index {n + 1} beyond prefix length {len(prefix)}")
    a = et_quotient(prefix, n)
    norm_n = dist_to_int(prefix[n] * t)
    thr = nt / (2 * a)
    premise = norm_n < thr
    norm_next = dist_to_int(prefix[n + 1] * t)
    conclusion = norm_next > nt / 2
    if premise and not conclusion:
        raise DichotomyViolation(f"premise holds but conclusion fails at n={n}, t={t}")
    return DichotomyWitness(n, a, t, norm_n, thr, premise, norm_next, nt / 2, conclusion)


# ---------------------------------------------------------------------------
# factorial-type embedding


@dataclass
class LaserbeamTerm:
    N: int
    main: Fraction
    theta: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return 0 <= self.theta <= self.bound

    def to_json(self) -> dict:
        return {"N": self.N, "main": format_rational(self.main), "theta": format_rational(self.theta), "bound": format_rational(self.bound)}


@dataclass
class Example42Result:
    t: CertifiedReal
    t_point: Fraction
    laserbeam: list[LaserbeamTerm]
    square_sum: CertifiedReal
    square_bound_ok: bool
    square_bound_small_ok: bool
    term_bounds_ok: bool

    @property
    def decomposition_ok(self) -> bool:
        return all(x.ok for x in self.laserbeam)

    def to_json(self) -> dict:
        return {
            "t": self.t.to_json(),
            "t_point": format_rational(self.t_point),
            "laserbeam": [x.to_json() for x in self.laserbeam],
            "square_sum": self.square_sum.to_json(),
            "square_sum_le_pi2_over_3": self.square_bound_ok,
            "square_sum_le_pi_over_3": self.square_bound_small_ok,
            "term_bounds_ok": self.term_bounds_ok,
        }


def example42_point(prefix: SequencePrefix, w) -> Example42Result:
    """``t(w) = sum_n w_n / b_n`` for ``b_n = a_1 ... a_n`` and its decomposition
    ``<b_N t> = w_{N+1} / a_{N+1} + theta_N`` with ``0 <= theta_N <= 1/a_{N+1}**2``."""
    w = _word(w)
    d = len(w)
    if d > len(prefix):
        raise PrefixTooShort(f"word length {d} beyond prefix length {len(prefix)}")
    a = multiplicative_ratios(prefix)
    if any(x < 2 for x in a):
        raise RatioConditionFailed("a_k >= 2 fails")
    t_d = sum((Fraction(bit, prefix[n]) for n, bit in enumerate(w.bits, start=1)), Fraction(0))
    tail = Fraction(2, prefix[d + 1]) if d + 1 <= len(prefix) else Fraction(1, prefix[d])
    t = CertifiedReal(t_d, t_d + tail)
    terms = []
    for N in range(1, d):
        x = prefix[N] * t_d
        main = Fraction(w.bits[N], a[N])
        theta = signed_frac(x) - main
        terms.append(LaserbeamTerm(N, main, theta, Fraction(1, a[N] ** 2)))
    sq = CertifiedReal.point(0)
    term_ok = True
    for N in range(1, d):
        y = dist_to_int_certified(t * prefix[N])
        sq = sq + CertifiedReal(y.lo ** 2, y.hi ** 2)
        term_ok = term_ok and y.hi ** 2 <= Fraction(2, N * N)
    return Example42Result(
        t,
        t_d,
        terms,
        sq,
        sq.hi <= PI_LO ** 2 / 3,
        sq.hi <= PI_LO / 3,
        term_ok,
    )


def frac_decomposition(prefix: SequencePrefix, t: Fraction, N: int) -> Fraction:
    """``b_N t mod 1`` in [0, 1)."""
    return frac_part(prefix[N] * Fraction(t))
