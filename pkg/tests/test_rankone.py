from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np
import pytest

from riglab.errors import BaseNotOne, ConfigError, CutTooSmall, WordTooLarge
from riglab.exact import CertifiedReal
from riglab.rankone import (
    SPACER,
    LevelSet,
    build_word,
    closed_form_is_exact,
    delta_closed_form,
    delta_scan,
    delta_scan_shift,
    plan_from_sequence,
    rigidity_report,
    subadditivity_check,
)
from riglab.seq import prefix_of

DYADIC = plan_from_sequence(prefix_of([1, 2, 4, 8, 16, 32]))
SMALL = plan_from_sequence(prefix_of([1, 2, 21]))
DESK = plan_from_sequence(prefix_of([1, 2, 21, 422, 12662, 506482]))


def test_plan_examples():
    p = plan_from_sequence(prefix_of([1, 2, 4, 8]))
    assert [s.a for s in p.stages] == [2, 2, 2] and p.S == []
    assert [s.a for s in SMALL.stages] == [2, 10] and SMALL.r(2) == 1 and SMALL.S == [2]
    p = plan_from_sequence(prefix_of([1, 3, 10, 41]))
    assert [s.a for s in p.stages] == [3, 3, 4]
    assert [s.r for s in p.stages] == [0, 1, 1] and p.S == [2, 3]
    with pytest.raises(BaseNotOne):
        plan_from_sequence(prefix_of([2, 4]))
    with pytest.raises(CutTooSmall):
        plan_from_sequence(prefix_of([1, 3, 4]))


def test_build_word_examples():
    w = build_word(plan_from_sequence(prefix_of([1, 2, 4, 8])), 1, 3).word
    assert len(w) == 4 and set(w.tolist()) == {0}
    w = build_word(SMALL, 2, 3).word.tolist()
    assert w == [0, 1] * 5 + [SPACER] + [0, 1] * 5


@pytest.mark.parametrize("plan", [DYADIC, SMALL, DESK, plan_from_sequence(prefix_of([1, 3, 10, 41, 206]))])
def test_height_recursion_and_mass(plan):
    masses = [plan.total_mass(n) for n in range(1, plan.length + 1)]
    for n in range(1, plan.length):
        st = plan.stages[n - 1]
        assert plan.prefix[n + 1] == st.a * plan.prefix[n] + (st.r if st.in_S else 0)
        assert masses[n] - masses[n - 1] == st.r * plan.width(n + 1)
        assert len(build_word(plan, 1, n + 1)) == plan.prefix[n + 1]


def test_word_cap():
    plan = plan_from_sequence(prefix_of([1, 2, 21, 422]), cap=100)
    with pytest.raises(WordTooLarge):
        build_word(plan, 1, 4)


def test_delta_scan_examples():
    assert delta_scan(DYADIC, LevelSet(2, ()), 2, 4) == CertifiedReal.point(0)
    assert delta_scan(DYADIC, LevelSet(2, (0,)), 2, 4) == CertifiedReal(Fr(0), Fr(1, 4))
    # full tower of a pure-stacking stage: everything is undetermined top mass
    K = 3
    e = delta_scan(DYADIC, LevelSet(K, tuple(range(4))), K, K + 1)
    assert e == CertifiedReal(Fr(0), 2 * DYADIC.prefix[K] * DYADIC.width(K + 1))


def test_closed_form_examples():
    assert delta_closed_form(SMALL, LevelSet(2, (0, 1)), 2) == Fr(2, 5)
    assert delta_closed_form(DESK, LevelSet(3, ()), 3) == 0


def test_closed_form_example_versus_scan():
    # on the deeper plan the scan for A = tau_2 gives a much smaller value
    A = LevelSet(2, (0, 1))
    e = delta_scan(DESK, A, 2, 6)
    assert e.hi < Fr(2, 5)
    assert not closed_form_is_exact(DESK, A, 2)


def test_closed_form_never_below_scan_lower_end():
    for K in (2, 3, 4):
        for lvl in range(DESK.prefix[K]):
            A = LevelSet(K, (lvl,))
            for n in range(K, 6):
                assert delta_closed_form(DESK, A, n) >= delta_scan(DESK, A, n, 6).lo


def test_closed_form_agrees_when_flagged():
    checked = 0
    for K in (3, 4):
        for lvl in range(0, DESK.prefix[K], 7):
            A = LevelSet(K, (lvl,))
            for n in range(K, 6):
                if closed_form_is_exact(DESK, A, n):
                    checked += 1
                    assert delta_scan(DESK, A, n, 6).contains(delta_closed_form(DESK, A, n))
    assert checked > 20


def test_scan_enclosures_consistent_across_depth():
    A = LevelSet(3, (5,))
    encs = [delta_scan(DESK, A, 3, N) for N in (4, 5, 6)]
    for e1, e2 in zip(encs, encs[1:]):
        assert not e1.disjoint(e2)
    assert encs[-1].width <= encs[0].width


def test_shift_matches_bruteforce_count():
    plan = DESK
    A = LevelSet(2, (1,))
    word = build_word(plan, 2, 5).word
    inA = np.isin(word, [1])
    h = plan.prefix[3]
    L = int(np.sum(inA[:-h] & ~inA[h:]))
    e = delta_scan_shift(plan, A, h, 5)
    assert e.lo >= 2 * L * plan.width(5)


def test_report_empty_set_is_zero():
    r = rigidity_report(DESK, LevelSet(3, ()), 5, 1)
    assert all(u == 0 for u in r.upper) and r.partial_sum == 0


def test_report_partial_sum_within_s_bound():
    for K in (2, 3):
        for lvl in range(0, DESK.prefix[K], 5):
            r = rigidity_report(DESK, LevelSet(K, (lvl,)), 5, 1)
            assert r.partial_sum <= r.s_bound


def test_report_beyond_cap_uses_closed_form():
    plan = plan_from_sequence(prefix_of([1, 2, 21, 422, 12662]), cap=500)
    r = rigidity_report(plan, LevelSet(2, (0,)), 4, 1)
    assert r.sources[-1] == "closed-form"
    assert r.enclosures[-1] is None


def test_subadditivity_pairs():
    A = LevelSet(2, (0,))
    for j in range(2, 5):
        for k in range(j + 1, 5):
            both, ej, ek, ok = subadditivity_check(DESK, A, j, k, 6)
            assert ok


def test_levelset_validation():
    with pytest.raises(ConfigError):
        delta_scan(DESK, LevelSet(2, (5,)), 2, 4)
    with pytest.raises(ConfigError):
        LevelSet.from_json({"stage": 1})
