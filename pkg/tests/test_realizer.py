import itertools
from fractions import Fraction

import pytest

from subshift_entropy.estimator import IrreducibilityRate
from subshift_entropy.frequency import FrequencySequence, golden_mean_sequence, member_frequency
from subshift_entropy.realizer import (RealizationState, TargetEntropy, branch_soundness,
                                       corridor_monitor, evaluate_conditions, gluing_holds,
                                       initial_state, lemma_invariant_holds, lift_to_dimension,
                                       mixing_condition, realize, stage_subshifts, step,
                                       unit_steps_hold)

LINEAR = IrreducibilityRate.linear()
HALF = TargetEntropy.constant(Fraction(1, 2))


def test_target_validation():
    assert HALF(7) == Fraction(1, 2)
    with pytest.raises(ValueError):
        TargetEntropy.constant(0)
    with pytest.raises(ValueError):
        TargetEntropy.constant(Fraction(3, 2))


def test_initial_state_completion():
    s = initial_state(LINEAR)
    assert s.values == (1, 2, 3) and s.stage == 1
    s = initial_state(IrreducibilityRate.constant(1))
    assert s.values == (1, 2, 3)
    with pytest.raises(ValueError):
        initial_state(IrreducibilityRate.constant(2))


def test_stage_subshifts_examples():
    plus, minus = stage_subshifts(initial_state(LINEAR))
    assert plus.values == (1, 2, 3, 4, 5, 6)
    assert minus.values == (1, 2, 3, 3, 3, 3)
    plus, minus = stage_subshifts(initial_state(IrreducibilityRate.constant(1)))
    assert plus.values == (1, 2, 3, 4, 5)
    assert minus.values == (1, 2, 3, 3, 3)


def test_minus_language_inside_plus_language():
    plus, minus = stage_subshifts(initial_state(LINEAR))
    for n in range(1, 11):
        for w in itertools.product((0, 1), repeat=n):
            if member_frequency(minus, w):
                assert member_frequency(plus, w)


def test_entropy_condition_near_full_shift():
    # full-shift prefix through F(4) = 12; the minus stage keeps entropy near 1
    s = RealizationState(FrequencySequence(tuple(range(1, 13))), 4, lambda n: 3 * n)
    out = evaluate_conditions(s, HALF)
    assert out["entropy"] is True and out["mixing"] is True and out["both_hold"]
    assert out["enclosure"].lower >= Fraction(1, 2) + Fraction(1, 8)


def test_entropy_condition_cannot_hold_at_stage_one():
    # q_1 - 1/2 >= 1/2 would need q_1 >= 1
    out = evaluate_conditions(initial_state(LINEAR), HALF)
    assert out["entropy"] is False and out["method"] == "exact"
    assert out["enclosure"].width <= Fraction(1, 4)


def test_entropy_condition_fails_for_heavy_constraints():
    p = FrequencySequence((1,) * 7)
    s = RealizationState(p, 2, lambda n: 2 * n + n)
    out = evaluate_conditions(s, HALF)
    assert out["entropy"] is False


def test_mixing_condition_fails_below_twice():
    # the initial state has p_F(1) = p_3 = 3 = 2 p_2 - 1
    s = initial_state(LINEAR)
    assert s.p(s.F(1)) == 2 * s.p(2) - 1 and not mixing_condition(s)


def test_alpha_one_takes_plus_every_stage():
    s = realize(TargetEntropy.constant(1), LINEAR, 3)
    assert [r.branch for r in s.history] == ["plus"] * 3
    assert s.values == tuple(range(1, 13))


def test_zero_stages_is_the_initial_state():
    assert realize(HALF, LINEAR, 0).values == (1, 2, 3)


@pytest.fixture(scope="module")
def half_run():
    return realize(HALF, LINEAR, 30)


def test_monitors_on_half_run(half_run):
    s = half_run
    assert unit_steps_hold(s)
    assert lemma_invariant_holds(s)
    assert branch_soundness(s)
    branches = {r.branch for r in s.history}
    assert branches == {"plus", "minus"}
    assert len(corridor_monitor(s)) == s.stage


def test_entropy_holding_stages_stay_above_alpha(half_run):
    for r in half_run.history:
        if r.entropy_holds:
            assert r.enclosure.upper >= r.alpha - r.enclosure.width


def test_stage_languages_are_nested(half_run):
    F = half_run.F
    prefixes = [FrequencySequence(half_run.values[:F(n)]) for n in range(1, half_run.stage + 1)]
    for a, b in zip(prefixes, prefixes[1:]):
        for m in range(1, 11):
            for w in itertools.product((0, 1), repeat=m):
                if member_frequency(b, w):
                    assert member_frequency(a, w)


def test_gluing_on_half_run(half_run):
    assert all(gluing_holds(half_run.p, n, n) for n in range(1, 6))


def test_history_export(half_run):
    rec = half_run.history[1].as_dict()
    assert set(rec) >= {"stage", "branch", "p_F", "alpha", "mixing_holds", "enclosure"}
    assert rec["alpha"] == {"num": "1", "den": "2"}


def test_step_refuses_to_break_the_invariant():
    # F(n) = 2n + 1; plus adds only two units, too few for 2 p_4 = 8
    s = RealizationState(FrequencySequence((1, 2, 3, 4, 4, 4, 4)), 3, lambda n: 2 * n + 1)
    with pytest.raises(AssertionError):
        step(s, HALF)


def test_lift_to_dimension():
    cert = lift_to_dimension(golden_mean_sequence(), 2)
    assert cert.dimension == 2
    assert cert.member_box([(0, 1, 0), (0, 0, 0), (1, 0, 1)])
    assert not cert.member_box([(0, 1, 1), (0, 0, 0), (0, 0, 0)])
    assert cert.member_box([(0,) * 3] * 3)
    rows = [w for w in itertools.product((0, 1), repeat=3) if member_frequency(cert.p, w)]
    boxes = sum(1 for box in itertools.product(rows, repeat=3) if cert.member_box(box))
    brute = sum(1 for cells in itertools.product((0, 1), repeat=9)
                if cert.member_box([cells[0:3], cells[3:6], cells[6:9]]))
    assert boxes == brute == 125
    with pytest.raises(ValueError):
        lift_to_dimension(golden_mean_sequence(), 1)
