from __future__ import annotations

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riglab.errors import ConfigError, NonIncreasing, RuleDomain
from riglab.seq import (
    IndexRule,
    SequenceSpec,
    classify,
    generate,
    is_growth,
    prefix_of,
    ratio_power_sum,
    ratio_power_tail_bound,
    superlacunary_evidence,
)

ET = SequenceSpec("erdos-taylor", IndexRule.affine(1, 1))
POW2 = SequenceSpec("multiplicative", IndexRule.constant(2))
FACT = SequenceSpec("factorial-products", IndexRule.affine(1, 1))


def test_generate_examples():
    assert generate(ET, 5).values == (1, 3, 10, 41, 206)
    assert generate(POW2, 4).values == (1, 2, 4, 8)
    assert generate(FACT, 4).values == (2, 6, 24, 120)


def test_classify_powers_of_two():
    r = classify(prefix_of([1, 2, 4, 8]), 2, 2)
    assert r.multiplicative and r.growth and r.lacunary
    assert r.ratio_sum == Fr(3, 4)


def test_classify_factorials():
    r = classify(prefix_of([2, 6, 24, 120]), 1, 3)
    assert r.multiplicative and r.lacunary
    assert r.ratio_sum == Fr(47, 60)


def test_classify_et_not_multiplicative():
    assert not classify(prefix_of([1, 3, 10, 41]), 1, 2).multiplicative


def test_classify_rejects_bad_parameters():
    with pytest.raises(ConfigError):
        classify(prefix_of([1, 2, 4]), 0, 2)
    with pytest.raises(ConfigError):
        classify(prefix_of([1, 2, 4]), 1, 1)


def test_rule_domain_and_monotonicity_errors():
    with pytest.raises(RuleDomain):
        IndexRule.affine(-5, 1)(2)
    with pytest.raises(NonIncreasing):
        generate(SequenceSpec("explicit", IndexRule.explicit([3, 2])), 2)
    with pytest.raises(RuleDomain):
        generate(SequenceSpec("explicit", IndexRule.explicit([1, 2])), 3)


def test_json_roundtrip():
    for spec in [ET, POW2, FACT, SequenceSpec("explicit", IndexRule.explicit([1, 5, 9]))]:
        again = SequenceSpec.from_json(spec.to_json())
        assert generate(again, 3).values == generate(spec, 3).values
    with pytest.raises(ConfigError) as exc:
        SequenceSpec.from_json({"kind": "nope"})
    assert exc.value.field == "kind"


def test_power_floor_rule():
    r = IndexRule.power_floor(Fr(3, 2))
    assert [r(n) for n in range(1, 5)] == [1, 2, 5, 8]


@settings(max_examples=30)
@given(st.integers(1, 30), st.integers(1, 30))
def test_generate_prefix_stable(M, N):
    M, N = min(M, N), max(M, N)
    assert generate(ET, N).values[:M] == generate(ET, M).values


def test_erdos_taylor_congruence():
    b = generate(ET, 25).values
    assert all((b[i + 1] - 1) % b[i] == 0 for i in range(len(b) - 1))


def test_factorial_ratio():
    b = generate(FACT, 25).values
    assert all(b[i + 1] // b[i] == i + 3 and b[i + 1] % b[i] == 0 for i in range(len(b) - 1))


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=12))
def test_growth_predicate_matches_definition(xs):
    vals = sorted(set(xs))
    expected = all(vals[i] > sum(vals[:i]) for i in range(len(vals)))
    assert is_growth(vals) == expected


def test_superlacunary_evidence_window():
    assert superlacunary_evidence([Fr(11 + k) for k in range(5)])
    assert not superlacunary_evidence([Fr(11)] * 5)
    assert not superlacunary_evidence([Fr(5 + k) for k in range(5)])


def test_ratio_tail_bound_dominates_long_prefix():
    for spec in [FACT, ET, SequenceSpec("multiplicative", IndexRule.affine(2, 1))]:
        M = 4
        bound = ratio_power_tail_bound(spec, M, 2)
        vals = generate(spec, 200).values
        assert ratio_power_sum(vals, Fr(2), start=M) <= bound
    assert ratio_power_tail_bound(POW2, 1, 2) is None
    assert ratio_power_tail_bound(FACT, 1, 1) is None


def test_fractional_p_ratio_sum_is_interval():
    s = ratio_power_sum((1, 4, 16), Fr(1, 2))
    assert s.contains(Fr(1))
