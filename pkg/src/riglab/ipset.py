"""Finite-sum sets FS(b): subset sums, counting and window defects."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConfigError, Infeasible, IndexOutOfPrefix, PrefixTooShort, WindowTooWide
from .exact import HALF, CertifiedReal, as_certified, dist_to_int, signed_frac
from .seq import SequencePrefix

MAX_WINDOW = 24
DEFAULT_COUNT_CAP = 1 << 24
_BITSET_LIMIT = 1 << 27
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class IndexSet:
    """A nonempty finite set of positive indices, kept sorted."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if not idx:
            raise ConfigError("F", "index set must be nonempty")
        if idx[0] < 1:
            raise ConfigError("F", "indices must be positive")
        object.__setattr__(self, "indices", idx)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    @property
    def min(self) -> int:
        return self.indices[0]

    @property
    def max(self) -> int:
        return self.indices[-1]

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.indices + other.indices)

    def disjoint(self, other: "IndexSet") -> bool:
        return not set(self.indices) & set(other.indices)


def _as_indices(F) -> tuple[int, ...]:
    return F.indices if isinstance(F, IndexSet) else IndexSet(tuple(F)).indices


def sum_of(prefix: SequencePrefix, F) -> int:
    """``b(F) = sum_{j in F} b_j``."""
    idx = _as_indices(F)
    if idx[-1] > len(prefix):
        raise IndexOutOfPrefix(f"index {idx[-1]} beyond prefix length {len(prefix)}")
    return sum(prefix.values[j - 1] for j in idx)


class FsCount(NamedTuple):
    count: int
    c: int


def c_of(prefix: SequencePrefix, n: int) -> int:
    """``c(n) = min{k : b_k >= n}``."""
    for k, v in enumerate(prefix.values, start=1):
        if v >= n:
            return k
    raise PrefixTooShort(f"b_last = {prefix.values[-1]} < n = {n}")


def count_fs(prefix: SequencePrefix, n: int, cap: int = DEFAULT_COUNT_CAP) -> FsCount:
    """Number of distinct subset sums ``b(F) <= n``, together with ``c(n)``."""
    c = c_of(prefix, n)
    parts = [v for v in prefix.values if v <= n]
    if n < _BITSET_LIMIT:
        # bit s of ``reach`` marks a realizable sum s
        mask = (1 << (n + 1)) - 1
        reach = 1
        for v in parts:
            reach = (reach | (reach << v)) & mask
        return FsCount(reach.bit_count() - 1, c)
    sums = {0}
    for v in parts:
        sums |= {s + v for s in sums if s + v <= n}
        if len(sums) > cap:
            raise Infeasible(f"more than {cap} distinct sums below {n}")
    return FsCount(len(sums) - 1, c)


def count_fs_bruteforce(values: Sequence[int], n: int) -> int:
    """Reference count by listing every subset (small inputs only)."""
    vals = [v for v in values if v <= n]
    sums = set()
    for mask in range(1, 1 << len(vals)):
        s = sum(v for i, v in enumerate(vals) if mask >> i & 1)
        if s <= n:
            sums.add(s)
    return len(sums)


def growth_count_bounds(count: int, c: int) -> bool:
    """``2**(c-2) - 1 <= count <= 2**c``."""
    lower = (1 << (c - 2)) - 1 if c >= 2 else 0
    return lower <= count <= (1 << c)


def subset_sums(values: Sequence[int], cap: int = DEFAULT_COUNT_CAP) -> list[int]:
    """All ``2**k`` subset sums in binary-counter order (bit i of the index selects ``values[i]``)."""
    if (1 << len(values)) > cap:
        raise Infeasible(f"2^{len(values)} subsets exceed the cap {cap}")
    sums = [0]
    for v in values:
        sums = sums + [s + v for s in sums]
    return sums


def sums_distinct(values: Sequence[int], cap: int = DEFAULT_COUNT_CAP) -> bool:
    sums = subset_sums(values, cap)
    return len(set(sums)) == len(sums)


# ---------------------------------------------------------------------------
# window defects


def _check_window(prefix: SequencePrefix, N: int, W: int) -> list[int]:
    if W > MAX_WINDOW:
        raise WindowTooWide(f"window width {W} exceeds {MAX_WINDOW}")
    if W < 1 or N < 1:
        raise ConfigError("width", "window start and width must be >= 1")
    if N + W - 1 > len(prefix):
        raise IndexOutOfPrefix(f"window [{N}, {N + W - 1}] beyond prefix length {len(prefix)}")
    return list(prefix.values[N - 1 : N - 1 + W])


def residue_sums(residues: Sequence[int], Q: int) -> np.ndarray:
    """All subset sums of ``residues`` reduced mod ``Q`` (index bit i selects residue i)."""
    if Q < _INT64_SAFE:
        sums = np.zeros(1, dtype=np.int64)
        for r in residues:
            sums = np.concatenate([sums, (sums + np.int64(r)) % np.int64(Q)])
        return sums
    sums = [0]
    for r in residues:
        sums = sums + [(s + r) % Q for s in sums]
    return np.array(sums, dtype=object)


def max_dist_point(window: Sequence[int], x: Fraction) -> tuple[Fraction, int]:
    """``max_F ||b(F) x||`` over nonempty F within the window, and the maximizing mask."""
    P, Q = x.numerator, x.denominator
    residues = [(v * P) % Q for v in window]
    sums = residue_sums(residues, Q)
    sums[0] = 0
    dist = np.minimum(sums, Q - sums) if sums.dtype != object else np.array([min(s, Q - s) for s in sums], dtype=object)
    dist[0] = -1
    best = int(np.argmax(dist))
    return Fraction(int(dist[best]), Q), best


def ip_defect_scalar(prefix: SequencePrefix, t, N: int, W: int) -> CertifiedReal:
    """Enclosure of ``max{||b(F) t|| : F nonempty, F within [N, N+W-1]}``."""
    window = _check_window(prefix, N, W)
    t = as_certified(t)
    best, _ = max_dist_point(window, t.lo)
    if t.is_point:
        return CertifiedReal.point(best)
    # ||.|| is 1-Lipschitz and b(F) <= sum(window)
    slack = sum(window) * t.width
    return CertifiedReal(max(Fraction(0), best - slack), min(HALF, best + slack))


def window_masks_to_sets(N: int, mask: int) -> tuple[int, ...]:
    return tuple(N + i for i in range(mask.bit_length()) if mask >> i & 1)


def additivity_check(prefix: SequencePrefix, t: Fraction, F, G, threshold: Fraction = Fraction(1, 16)) -> Optional[bool]:
    """``None`` when some defect is at least the threshold, else whether
    ``<b(F u G) t> = <b(F) t> + <b(G) t>`` holds exactly."""
    F, G = IndexSet(_as_indices(F)), IndexSet(_as_indices(G))
    if not F.disjoint(G):
        raise ConfigError("G", "F and G must be disjoint")
    t = Fraction(t)
    xf, xg = sum_of(prefix, F) * t, sum_of(prefix, G) * t
    xu = sum_of(prefix, F.union(G)) * t
    if max(dist_to_int(xf), dist_to_int(xg), dist_to_int(xu)) >= threshold:
        return None
    return signed_frac(xu) == signed_frac(xf) + signed_frac(xg)


def iter_window_subsets(N: int, W: int) -> Iterable[tuple[int, ...]]:
    for mask in range(1, 1 << W):
        yield window_masks_to_sets(N, mask)
