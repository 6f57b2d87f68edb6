"""Cutting-and-stacking towers built from a sequence, and exact symmetric differences.

Tower ``tau_n`` has ``b_n`` levels of width ``w_n = prod_{j<n} 1/a_j``.  The
word ``W_N`` of ``tau_N`` relative to a reference stage ``K`` lists, bottom to
top, which level of ``tau_K`` each level of ``tau_N`` lies in (``SPACER``
for spacer levels added after stage ``K``).  The map T moves one level up,
so ``T^h`` sends position ``i`` to ``i + h`` whenever ``i + h < b_N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .errors import BaseNotOne, ConfigError, CutTooSmall, NoSpacerStageAhead, WordTooLarge
from .exact import CertifiedReal, format_rational, pow_exact_or_certified
from .seq import SequencePrefix

SPACER = -1
DEFAULT_CAP = 10 ** 7


@dataclass(frozen=True)
class StageRecord:
    n: int
    a: int
    r: int

    @property
    def in_S(self) -> bool:
        return self.r != 0


@dataclass(frozen=True)
class CutStackPlan:
    prefix: SequencePrefix
    stages: tuple[StageRecord, ...]
    cap: int = DEFAULT_CAP

    @property
    def length(self) -> int:
        """Number of towers ``tau_1..tau_L``."""
        return len(self.prefix)

    def a(self, n: int) -> int:
        return self.stages[n - 1].a

    def r(self, n: int) -> int:
        return self.stages[n - 1].r

    def in_S(self, n: int) -> bool:
        return self.stages[n - 1].in_S

    @property
    def S(self) -> list[int]:
        return [s.n for s in self.stages if s.in_S]

    def width(self, n: int) -> Fraction:
        """``w_n = prod_{j<n} 1/a_j``."""
        w = Fraction(1)
        for j in range(1, n):
            w /= self.a(j)
        return w

    def s_inverse_sum(self) -> Fraction:
        return sum((Fraction(1, s.a) for s in self.stages if s.in_S), Fraction(0))

    def total_mass(self, n: int) -> Fraction:
        return self.prefix[n] * self.width(n)

    def to_json(self) -> dict:
        return {
            "b": [str(v) for v in self.prefix.values],
            "a": [str(s.a) for s in self.stages],
            "r": [str(s.r) for s in self.stages],
            "S": self.S,
            "s_inverse_sum": format_rational(self.s_inverse_sum()),
        }


def plan_from_sequence(prefix: SequencePrefix, cap: int = DEFAULT_CAP) -> CutStackPlan:
    """``a_n = floor(b_{n+1}/b_n)``, ``r_n = b_{n+1} mod b_n``; stage n is in S iff ``r_n != 0``."""
    if prefix[1] != 1:
        raise BaseNotOne(f"b_1 = {prefix[1]}, expected 1")
    stages = []
    for n in range(1, len(prefix)):
        a, r = divmod(prefix[n + 1], prefix[n])
        if a < 2:
            raise CutTooSmall(f"a_{n} = {a} < 2")
        stages.append(StageRecord(n, a, r))
    return CutStackPlan(prefix, tuple(stages), cap)


@dataclass(frozen=True)
class LevelSet:
    stage: int
    levels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(sorted(set(int(i) for i in self.levels))))
        if self.stage < 1:
            raise ConfigError("stage", "stage must be >= 1")

    def validate(self, plan: CutStackPlan) -> None:
        if self.stage > plan.length:
            raise ConfigError("stage", f"stage {self.stage} beyond plan length {plan.length}")
        bk = plan.prefix[self.stage]
        if any(not 0 <= i < bk for i in self.levels):
            raise ConfigError("levels", f"level indices must lie in [0, {bk})")

    def measure(self, plan: CutStackPlan) -> Fraction:
        return len(self.levels) * plan.width(self.stage)

    @classmethod
    def from_json(cls, doc: Any) -> "LevelSet":
        if not isinstance(doc, dict) or "stage" not in doc or "levels" not in doc:
            raise ConfigError("levels", "expected {'stage': K, 'levels': [...]}")
        try:
            return cls(int(doc["stage"]), tuple(int(i) for i in doc["levels"]))
        except (TypeError, ValueError):
            raise ConfigError("levels", "stage and levels must be integers") from None


@dataclass
class TowerWord:
    N: int
    K: int
    word: np.ndarray
    width: Fraction

    def __len__(self):
        return len(self.word)

    def counts(self) -> dict[int, int]:
        vals, cnt = np.unique(self.word, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, cnt)}


def build_word(plan: CutStackPlan, K: int, N: int) -> TowerWord:
    if not 1 <= K <= N <= plan.length:
        raise ConfigError("N", f"need 1 <= K <= N <= {plan.length}")
    if plan.prefix[N] > plan.cap:
        raise WordTooLarge(f"b_{N} = {plan.prefix[N]} exceeds the cap {plan.cap}")
    word = np.arange(plan.prefix[K], dtype=np.int64)
    for n in range(K, N):
        st = plan.stages[n - 1]
        if st.in_S:
            h = st.a // 2
            parts = [np.tile(word, h), np.array([SPACER], dtype=np.int64), np.tile(word, st.a - h)]
            if st.r > 1:
                parts.append(np.full(st.r - 1, SPACER, dtype=np.int64))
            word = np.concatenate(parts)
        else:
            word = np.tile(word, st.a)
    assert len(word) == plan.prefix[N]
    return TowerWord(N, K, word, plan.width(N))


def _membership(plan: CutStackPlan, A: LevelSet, N: int) -> np.ndarray:
    tw = build_word(plan, A.stage, N)
    mask = np.zeros(plan.prefix[A.stage] + 1, dtype=bool)
    if A.levels:
        mask[np.array(A.levels)] = True
    # index -1 (spacer) reads the final slot, which stays False
    return mask[tw.word]


def delta_scan_shift(plan: CutStackPlan, A: LevelSet, h: int, N: int) -> CertifiedReal:
    """Enclosure of ``m(A xor T^h A)`` read from the word of ``tau_N``.

    Positions ``p < b_N - h`` have a known image ``p + h``.  With
    ``L = #{p in A, p+h not in A}``, ``L' = #{p not in A, p+h in A}`` and
    ``U`` the number of A-levels among the top ``h`` positions, measure
    preservation gives ``m(A - T^-h A) = m(T^-h A - A)`` and so
    ``2 max(L, L') w <= m <= 2 (L + U) w``.
    """
    A.validate(plan)
    if not A.levels:
        return CertifiedReal.point(0)
    inA = _membership(plan, A, N)
    bN = len(inA)
    if h >= bN:
        raise ConfigError("N", f"shift {h} not below b_N = {bN}")
    head, shifted = inA[: bN - h], inA[h:]
    L = int(np.count_nonzero(head & ~shifted))
    Lp = int(np.count_nonzero(~head & shifted))
    U = int(np.count_nonzero(inA[bN - h :]))
    w = plan.width(N)
    return CertifiedReal(2 * max(L, Lp) * w, 2 * (L + U) * w)


def delta_scan(plan: CutStackPlan, A: LevelSet, n: int, N: int) -> CertifiedReal:
    """Enclosure of ``m(A xor T^{b_n} A)``."""
    if not A.stage <= n <= N:
        raise ConfigError("n", "need A.stage <= n <= N")
    return delta_scan_shift(plan, A, plan.prefix[n], N)


def next_spacer_stage(plan: CutStackPlan, n: int) -> int:
    for s in range(n, plan.length):
        if plan.in_S(s):
            return s
    raise NoSpacerStageAhead(f"no S-stage at or after {n} in the plan")


def delta_closed_form(plan: CutStackPlan, A: LevelSet, n: int) -> Fraction:
    """``4 prod_{j=n}^{s} (1/a_j) m(A)`` with ``s`` the first S-stage at or after ``n``."""
    if n < A.stage:
        raise ConfigError("n", "need n >= A.stage")
    s = next_spacer_stage(plan, n)
    value = 4 * A.measure(plan)
    for j in range(n, s + 1):
        value /= plan.a(j)
    return value


def closed_form_is_exact(plan: CutStackPlan, A: LevelSet, n: int) -> bool:
    """Structural condition under which the closed form has matched the scan.

    Checked against ``delta_scan`` in the tests; it is not a proof.

    The two ``tau_n``-stalks next to the spacer block of stage ``s`` each lose
    a copy of A only when the returning levels cannot land back in A: the
    A-levels (read in ``tau_n``) contain no two at distance 1 across the
    spacer shift, which holds when ``r_s >= 2`` and A spans fewer than
    ``r_s - 1`` consecutive levels with no adjacent pair.
    """
    if not A.levels:
        return True
    s = next_spacer_stage(plan, n)
    if plan.r(s) < 2:
        return False
    word = build_word(plan, A.stage, n).word if plan.prefix[n] <= plan.cap else None
    if word is None:
        return False
    pos = np.flatnonzero(np.isin(word, np.array(A.levels)))
    if len(pos) == 0:
        return True
    if np.any(np.diff(pos) == 1):
        return False
    return int(pos[-1] - pos[0]) < plan.r(s) - 1


@dataclass
class RigidityReport:
    p: Fraction
    n_values: list[int]
    enclosures: list[CertifiedReal]
    closed_forms: list[Optional[Fraction]]
    upper: list[Fraction]
    partial_sum: object
    ip_tail_bounds: list[Fraction]
    s_bound: Optional[Fraction]
    sources: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        ps = self.partial_sum
        return {
            "p": format_rational(self.p),
            "n": self.n_values,
            "enclosures": [None if e is None else e.to_json() for e in self.enclosures],
            "sources": self.sources,
            "closed_forms": [None if c is None else format_rational(c) for c in self.closed_forms],
            "upper": [format_rational(u) for u in self.upper],
            "partial_sum": ps.to_json() if isinstance(ps, CertifiedReal) else format_rational(ps),
            "ip_tail_bounds": [format_rational(x) for x in self.ip_tail_bounds],
            "s_bound": None if self.s_bound is None else format_rational(self.s_bound),
        }


def _largest_scan_stage(plan: CutStackPlan) -> int:
    N = 1
    while N < plan.length and plan.prefix[N + 1] <= plan.cap:
        N += 1
    return N


def rigidity_report(plan: CutStackPlan, A: LevelSet, n_max: int, p, N: Optional[int] = None) -> RigidityReport:
    """Per-n enclosures of ``m(A xor T^{b_n} A)``, the partial sum of their p-th powers,
    and tail bounds ``sum_{n >= M} upper_n`` that dominate ``m(A xor T^{b(F)} A)`` for ``min F >= M``."""
    A.validate(plan)
    p = Fraction(p)
    N = N or _largest_scan_stage(plan)
    if n_max > N:
        raise WordTooLarge(f"n_max = {n_max} needs a tower above the cap")
    ns = list(range(A.stage, n_max + 1))
    encs, closed, upper, sources = [], [], [], []
    for n in ns:
        try:
            c = delta_closed_form(plan, A, n)
        except NoSpacerStageAhead:
            c = None
        if n < N:
            e = delta_scan(plan, A, n, N)
            upper.append(e.hi)
            sources.append("scan")
        elif c is not None:
            # beyond the materialization cap only the closed form is available
            e = None
            upper.append(c)
            sources.append("closed-form")
        else:
            raise WordTooLarge(f"no evaluator for n = {n}")
        encs.append(e)
        closed.append(c)
    partial = Fraction(0)
    for u in upper:
        partial = partial + pow_exact_or_certified(u, p) if p.denominator == 1 else partial + pow_exact_or_certified(u, p).hi
    tails = [sum(upper[i:], Fraction(0)) for i in range(len(upper))]
    S_after = [s for s in plan.S if s >= A.stage]
    s_bound = 4 * A.measure(plan) * sum((Fraction(1, plan.a(s)) for s in S_after), Fraction(0)) if S_after else None
    return RigidityReport(p, ns, encs, closed, upper, partial, tails, s_bound, sources)


def subadditivity_check(plan: CutStackPlan, A: LevelSet, j: int, k: int, N: int) -> tuple[CertifiedReal, CertifiedReal, CertifiedReal, bool]:
    """Scan of shift ``b_j + b_k`` against the scans of the two parts."""
    both = delta_scan_shift(plan, A, plan.prefix[j] + plan.prefix[k], N)
    ej = delta_scan(plan, A, j, N)
    ek = delta_scan(plan, A, k, N)
    return both, ej, ek, both.lo <= ej.hi + ek.hi
