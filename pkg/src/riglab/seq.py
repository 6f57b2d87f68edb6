"""Sequence prefixes from declarative rules, and their classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

from .errors import ConfigError, NonIncreasing, RuleDomain
from .exact import CertifiedReal, format_rational, iroot, parse_rational, pow_certified

RULE_KINDS = ("explicit-list", "affine", "power-floor", "constant")
Rational = Union[int, Fraction]

SEQ_KINDS = ("explicit", "multiplicative", "erdos-taylor", "principal-denominators", "factorial-products")


def _rat(value: Any, name: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    try:
        return parse_rational(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(name, str(exc)) from None


def _int(value: Any, name: str) -> int:
    x = _rat(value, name)
    if x.denominator != 1:
        raise ConfigError(name, f"expected an integer, got {format_rational(x)}")
    return x.numerator


@dataclass(frozen=True)
class IndexRule:
    """A positive-integer valued rule ``n -> a_n`` for ``n >= 1``."""

    kind: str
    values: tuple[int, ...] = ()
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    e: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ConfigError("rule.kind", f"unknown rule kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        for name in ("c0", "c1", "e"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def explicit(cls, values: Sequence[int]) -> "IndexRule":
        return cls("explicit-list", values=tuple(values))

    @classmethod
    def affine(cls, c0, c1) -> "IndexRule":
        return cls("affine", c0=Fraction(c0), c1=Fraction(c1))

    @classmethod
    def constant(cls, c) -> "IndexRule":
        return cls("constant", c0=Fraction(c))

    @classmethod
    def power_floor(cls, e) -> "IndexRule":
        return cls("power-floor", e=Fraction(e))

    @property
    def length(self) -> Optional[int]:
        """Number of defined indices (``None`` when unbounded)."""
        return len(self.values) if self.kind == "explicit-list" else None

    def raw(self, n: int) -> Fraction:
        if n < 1:
            raise RuleDomain(f"rule evaluated at index {n} < 1")
        if self.kind == "explicit-list":
            if n > len(self.values):
                raise RuleDomain(f"explicit list has only {len(self.values)} entries, index {n} requested")
            return Fraction(self.values[n - 1])
        if self.kind == "affine":
            return self.c0 + self.c1 * n
        if self.kind == "constant":
            return self.c0
        # power-floor: floor(n ** (u/v))
        u, v = self.e.numerator, self.e.denominator
        if u >= 0:
            return Fraction(iroot(n ** u, v))
        # negative exponent: floor(1 / n^(|u|/v)) is 1 at n = 1, else 0
        return Fraction(1 if n == 1 else 0)

    def __call__(self, n: int) -> int:
        x = self.raw(n)
        if x.denominator != 1 or x <= 0:
            raise RuleDomain(f"rule {self.kind} gives {format_rational(x)} at n={n}, not a positive integer")
        return x.numerator

    def to_json(self) -> dict:
        if self.kind == "explicit-list":
            return {"kind": self.kind, "values": [str(v) for v in self.values]}
        if self.kind == "affine":
            return {"kind": self.kind, "c0": format_rational(self.c0), "c1": format_rational(self.c1)}
        if self.kind == "constant":
            return {"kind": self.kind, "value": format_rational(self.c0)}
        return {"kind": self.kind, "e": format_rational(self.e)}

    @classmethod
    def from_json(cls, doc: Any, where: str = "rule") -> "IndexRule":
        if isinstance(doc, list):
            return cls.explicit([_int(v, f"{where}[{i}]") for i, v in enumerate(doc)])
        if not isinstance(doc, dict):
            raise ConfigError(where, "expected an object or a list")
        kind = doc.get("kind")
        if kind not in RULE_KINDS:
            raise ConfigError(f"{where}.kind", f"expected one of {RULE_KINDS}, got {kind!r}")
        if kind == "explicit-list":
            vals = doc.get("values")
            if not isinstance(vals, list):
                raise ConfigError(f"{where}.values", "expected a list")
            return cls.explicit([_int(v, f"{where}.values[{i}]") for i, v in enumerate(vals)])
        if kind == "affine":
            return cls.affine(_rat(doc.get("c0", 0), f"{where}.c0"), _rat(doc.get("c1", 0), f"{where}.c1"))
        if kind == "constant":
            if "value" not in doc and "c0" not in doc:
                raise ConfigError(f"{where}.value", "missing")
            return cls.constant(_rat(doc.get("value", doc.get("c0")), f"{where}.value"))
        if "e" not in doc:
            raise ConfigError(f"{where}.e", "missing")
        return cls.power_floor(_rat(doc["e"], f"{where}.e"))


@dataclass(frozen=True)
class SequenceSpec:
    kind: str
    rule: Optional[IndexRule] = None
    seed: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in SEQ_KINDS:
            raise ConfigError("kind", f"unknown sequence kind {self.kind!r}")
        if self.kind != "explicit" and self.rule is None:
            raise ConfigError("rule", f"kind {self.kind} needs a rule")
        object.__setattr__(self, "seed", tuple(int(v) for v in self.seed))

    @property
    def max_length(self) -> Optional[int]:
        if self.kind == "explicit":
            return len(self.seed) if self.rule is None else self.rule.length
        n = self.rule.length
        if n is None:
            return None
        if self.kind in ("multiplicative", "erdos-taylor"):
            return n + 1
        return n

    def to_json(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.rule is not None:
            doc["rule"] = self.rule.to_json()
        if self.seed:
            doc["seed"] = [str(v) for v in self.seed]
        return doc

    @classmethod
    def from_json(cls, doc: Any) -> "SequenceSpec":
        if not isinstance(doc, dict):
            raise ConfigError("spec", "expected a JSON object")
        kind = doc.get("kind")
        if kind not in SEQ_KINDS:
            raise ConfigError("kind", f"expected one of {SEQ_KINDS}, got {kind!r}")
        rule = None
        if "rule" in doc:
            rule = IndexRule.from_json(doc["rule"])
        elif "quotients" in doc:
            rule = IndexRule.from_json(doc["quotients"], "quotients")
        elif "values" in doc and kind == "explicit":
            rule = IndexRule.from_json(doc["values"], "values")
        seed_doc = doc.get("seed", [])
        if not isinstance(seed_doc, list):
            raise ConfigError("seed", "expected a list")
        seed = tuple(_int(v, f"seed[{i}]") for i, v in enumerate(seed_doc))
        if kind == "explicit" and rule is None and not seed:
            raise ConfigError("values", "explicit sequence needs values")
        if kind != "explicit" and rule is None:
            raise ConfigError("rule", f"kind {kind} needs a rule")
        return cls(kind, rule, seed)


@dataclass(frozen=True)
class SequencePrefix:
    """Strictly increasing positive integers ``b_1 < ... < b_N`` (1-indexed)."""

    values: tuple[int, ...]
    spec: Optional[SequenceSpec] = None

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise RuleDomain("empty prefix")
        if vals[0] <= 0:
            raise RuleDomain(f"b_1 = {vals[0]} is not positive")
        for i in range(1, len(vals)):
            if vals[i] <= vals[i - 1]:
                raise NonIncreasing(f"b_{i + 1} = {vals[i]} <= b_{i} = {vals[i - 1]}")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        """1-indexed access ``b_n``."""
        if not 1 <= n <= len(self.values):
            raise IndexError(f"index {n} outside 1..{len(self.values)}")
        return self.values[n - 1]

    def b(self, n: int) -> int:
        return self[n]

    def ratio(self, n: int) -> Fraction:
        """``b_{n+1} / b_n``."""
        return Fraction(self[n + 1], self[n])

    def ratios(self) -> list[Fraction]:
        return [Fraction(self.values[i + 1], self.values[i]) for i in range(len(self.values) - 1)]

    def truncate(self, n: int) -> "SequencePrefix":
        return SequencePrefix(self.values[:n], self.spec)

    def index_rule_value(self, n: int) -> Optional[int]:
        """The generating ``a_n`` when the sequence has an index rule, else ``None``."""
        if self.spec is None or self.spec.rule is None:
            return None
        return self.spec.rule(n)


def prefix_of(values: Sequence[int]) -> SequencePrefix:
    vals = tuple(int(v) for v in values)
    return SequencePrefix(vals, SequenceSpec("explicit", None, vals))


def generate(spec: SequenceSpec, N: int) -> SequencePrefix:
    """Exactly ``b_1..b_N`` per the rule, or an error; never a shorter prefix."""
    if N < 1:
        raise ConfigError("n", f"N must be >= 1, got {N}")
    limit = spec.max_length
    if limit is not None and N > limit:
        raise RuleDomain(f"spec defines only {limit} terms, {N} requested")
    rule = spec.rule
    vals: list[int] = []
    if spec.kind == "explicit":
        vals = list(spec.seed[:N]) if rule is None else [rule(n) for n in range(1, N + 1)]
    elif spec.kind == "multiplicative":
        vals = [spec.seed[0] if spec.seed else 1]
        for n in range(1, N):
            vals.append(rule(n) * vals[-1])
    elif spec.kind == "erdos-taylor":
        vals = [spec.seed[0] if spec.seed else 1]
        for n in range(1, N):
            vals.append(rule(n) * vals[-1] + 1)
    elif spec.kind == "factorial-products":
        acc = 1
        for n in range(1, N + 1):
            acc *= rule(n)
            vals.append(acc)
    else:  # principal-denominators: b_n = q_n
        q_prev, q = 1, rule(1)
        vals = [q]
        for n in range(2, N + 1):
            q_prev, q = q, rule(n) * q + q_prev
            vals.append(q)
    if vals and vals[0] <= 0:
        raise RuleDomain(f"b_1 = {vals[0]} is not positive")
    for i in range(1, len(vals)):
        if vals[i] <= vals[i - 1]:
            raise NonIncreasing(f"rule produced b_{i + 1} = {vals[i]} <= b_{i} = {vals[i - 1]}")
    return SequencePrefix(tuple(vals), spec)


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    length: int
    multiplicative: bool
    growth: bool
    lacunary: bool
    lam: Fraction
    p: Fraction
    min_ratio: Fraction
    max_ratio: Fraction
    ratio_sum: Union[Fraction, CertifiedReal]
    ratios: list[Fraction] = field(default_factory=list)
    superlacunary_evidence: bool = False

    def to_json(self) -> dict:
        rs = self.ratio_sum
        return {
            "length": self.length,
            "multiplicative": self.multiplicative,
            "growth": self.growth,
            "lacunary": self.lacunary,
            "lambda": format_rational(self.lam),
            "p": format_rational(self.p),
            "min_ratio": format_rational(self.min_ratio),
            "max_ratio": format_rational(self.max_ratio),
            "ratio_sum": rs.to_json() if isinstance(rs, CertifiedReal) else format_rational(rs),
            "ratios": [format_rational(r) for r in self.ratios],
            "superlacunary_evidence": self.superlacunary_evidence,
        }


def is_multiplicative(values: Sequence[int]) -> bool:
    return all(values[i + 1] % values[i] == 0 for i in range(len(values) - 1))


def is_growth(values: Sequence[int]) -> bool:
    total = 0
    for v in values:
        if v <= total:
            return False
        total += v
    return True


def superlacunary_evidence(ratios: Sequence[Fraction], window: int = 5, threshold: Rational = 10) -> bool:
    if len(ratios) < window:
        return False
    tail = ratios[-window:]
    return all(r > threshold for r in tail) and all(tail[i] < tail[i + 1] for i in range(window - 1))



def ratio_power_sum(values: Sequence[int], p: Fraction, start: int = 1, bits: int = 64):
    """``sum_{n >= start} (b_n / b_{n+1})**p`` over the prefix; exact for integer p."""
    p = Fraction(p)
    terms = [Fraction(values[i], values[i + 1]) for i in range(start - 1, len(values) - 1)]
    if p.denominator == 1:
        return sum((x ** p.numerator for x in terms), Fraction(0))
    total = CertifiedReal.point(0)
    for x in terms:
        total = total + pow_certified(x, p, bits)
    return total


def classify(prefix: SequencePrefix, p: Rational, lam: Rational, window: int = 5, threshold: Rational = 10) -> ClassificationReport:
    if len(prefix) < 2:
        raise ConfigError("n", "classification needs a prefix of length >= 2")
    p, lam = Fraction(p), Fraction(lam)
    if p <= 0:
        raise ConfigError("p", "p must be positive")
    if lam <= 1:
        raise ConfigError("lambda", "lambda must exceed 1")
    vals = prefix.values
    ratios = prefix.ratios()
    return ClassificationReport(
        length=len(vals),
        multiplicative=is_multiplicative(vals),
        growth=is_growth(vals),
        lacunary=all(r >= lam for r in ratios),
        lam=lam,
        p=p,
        min_ratio=min(ratios),
        max_ratio=max(ratios),
        ratio_sum=ratio_power_sum(vals, p),
        ratios=ratios,
        superlacunary_evidence=superlacunary_evidence(ratios, window, threshold),
    )


def ratio_power_tail_bound(spec: Optional[SequenceSpec], M: int, p: Rational) -> Optional[Fraction]:
    """Upper bound on ``sum_{n >= M} (b_n / b_{n+1})**p`` over the whole infinite sequence.

    Available when the ratio dominates an affine rule with positive slope
    and ``p > 1``: every supported kind has ``b_{n+1}/b_n >= a_{n+s}`` with
    ``s`` in {0, 1}, and ``sum_{k >= K} (c0 + c1 k)**-p`` is at most the
    first term plus the integral ``A**(1-p) / (c1 (p-1))``.
    Returns ``None`` when no certificate is available.
    """
    p = Fraction(p)
    if spec is None or spec.rule is None or spec.rule.kind != "affine" or p <= 1:
        return None
    shift = {"multiplicative": 0, "erdos-taylor": 0, "factorial-products": 1, "principal-denominators": 1}.get(spec.kind)
    if shift is None:
        return None
    rule = spec.rule
    if rule.c1 <= 0:
        return None
    K = M + shift
    A = rule.c0 + rule.c1 * K
    if A < 1:
        return None
    inv = 1 / A
    first = pow_certified(inv, p).hi
    integral = pow_certified(inv, p - 1).hi / (rule.c1 * (p - 1))
    return first + integral
