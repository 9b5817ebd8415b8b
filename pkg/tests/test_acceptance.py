"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import contextlib
import itertools
import random
import sys
import time
from fractions import Fraction

import mpmath
import pytest

from subshift_entropy.core import LanguageOracle, enumerate_language, golden_mean, two_point
from subshift_entropy.dyadic import log2_bounds
from subshift_entropy.errors import BudgetExceeded
from subshift_entropy.estimator import (IrreducibilityRate, certified_entropy,
                                        condensation_check, floor_n_over_log2_squared,
                                        halving_inequality_check, log_power_schedule,
                                        upper_semicompute)
from subshift_entropy.frequency import (FrequencySequence, cap_map, count_frequency,
                                        entropy_enclosure, member_frequency)
from subshift_entropy.realizer import (TargetEntropy, branch_soundness, gluing_holds,
                                       lemma_invariant_holds, realize, unit_steps_hold)
from subshift_entropy.sft import (Sft1D, count_via_graph, member_by_listing, sft_from_words,
                                  spectral_entropy)

from oracles import count_by_extension, log2_golden, mp, sft_language_member

GOLDEN = sft_from_words(2, ["11"])


@contextlib.contextmanager
def criterion(number, title, limit_seconds, capsys):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit_seconds, f"took {elapsed:.2f}s, limit {limit_seconds}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            sys.stdout.write(f"\n[criterion {number:2d}] {status} {title} ({elapsed:.2f}s)\n")


def test_c01_golden_mean_spectral_enclosure(capsys):
    with criterion(1, "golden-mean spectral enclosure at 20 bits", 1, capsys):
        enc = spectral_entropy(GOLDEN.graph(), 20)
        assert enc.width <= Fraction(1, 2 ** 20)
        ref = log2_golden(50)
        assert mpmath.nstr(ref, 9).startswith("0.69424191")
        assert mp(enc.lower) <= ref <= mp(enc.upper)


def test_c02_monotone_upper_bounds(capsys):
    with criterion(2, "running-min upper bounds nonincreasing, above entropy", 5, capsys):
        oracle = GOLDEN.oracle()
        values = [upper_semicompute(oracle, n) for n in range(1, 17)]
        lower = spectral_entropy(GOLDEN.graph(), 20).lower
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert all(v >= lower for v in values)


def test_c03_certificate_at_desk_scale(capsys):
    with criterion(3, "certified entropy within 2^-t for t = 1..10", 5, capsys):
        oracle = GOLDEN.oracle()
        rate = IrreducibilityRate.constant(1)
        ref = log2_golden(60)
        for t in range(1, 11):
            est = certified_entropy(oracle, rate, t)
            assert abs(mp(est.value) - ref) <= mpmath.mpf(2) ** -t, t


def test_c04_log_power_schedule(capsys):
    with criterion(4, "log-power schedule n(0) = 4, resource error for t >= 3", 5, capsys):
        assert log_power_schedule(1, 0) == 4
        rate = IrreducibilityRate.log_power(1)
        est = certified_entropy(golden_mean(), rate, 0, schedule="series")
        assert est.counts_used["schedule_n"] == 4
        for t in (3, 4, 5):
            expected = log_power_schedule(1, t)
            with mpmath.workdps(60):
                assert expected == int(mpmath.ceil(mpmath.exp(mpmath.mpf(2) ** t) + 1))
            with pytest.raises(BudgetExceeded) as info:
                certified_entropy(golden_mean(), rate, t, schedule="series")
            assert info.value.required == expected
        assert log_power_schedule(1, 5) > 10 ** 13


def test_c05_cap_map_suite(capsys):
    with criterion(5, "cap map into L(p') and |L_kN(p)| <= N^k |L_kN(p')|", 60, capsys):
        counterexamples = []
        for N in range(2, 5):
            for steps in itertools.product((0, 1), repeat=N):
                p = FrequencySequence(tuple(itertools.accumulate(steps)))
                assert p(N) <= N
                lowered = p.lower_top()
                for k in range(1, 12 // N + 1):
                    words = [w for w in itertools.product((0, 1), repeat=k * N)
                             if member_frequency(p, w)]
                    counterexamples += [(p.values, w) for w in words
                                        if not member_frequency(lowered, cap_map(w, N))]
                    small = sum(1 for w in itertools.product((0, 1), repeat=k * N)
                                if member_frequency(lowered, w))
                    if len(words) > N ** k * small:
                        counterexamples.append((p.values, k))
        assert counterexamples == []


def test_c06_halving_inequality(capsys):
    with criterion(6, "halving inequality on golden mean, violation on two-point", 5, capsys):
        rate = IrreducibilityRate.constant(1)
        for n in range(1, 7):
            res = halving_inequality_check(golden_mean(), rate, n)
            assert res.holds, n
        control = halving_inequality_check(two_point(), rate, 2)
        assert not control.holds and control.counts[0] ** 2 > control.counts[1]


def test_c07_condensation_lemma(capsys):
    with criterion(7, "condensation with constant 1/2 for three rate families, k <= 10", 5,
                   capsys):
        families = {"constant 1": lambda n: 1, "identity": lambda n: n,
                    "n/log2^2 n": floor_n_over_log2_squared}
        failing = {name: [k for k in range(11) if not condensation_check(f, k, Fraction(1, 2))]
                   for name, f in families.items()}
        assert all(not ks for ks in failing.values()), failing


def test_c08_realization_run(capsys):
    with criterion(8, "realization for alpha = 1/2, f(n) = n, prefix >= 200", 120, capsys):
        state = realize(TargetEntropy.constant(Fraction(1, 2)), IrreducibilityRate.linear(), 0,
                        until_length=200)
        assert state.p.N >= 200
        assert unit_steps_hold(state)
        assert lemma_invariant_holds(state)
        assert branch_soundness(state)
        for n in range(1, 6):
            assert gluing_holds(state.p, n, n), n


def test_c09_oracle_equivalence(capsys):
    with criterion(9, "graph, brute and enumeration counts agree; listing agrees", 120, capsys):
        rng = random.Random(20240607)
        for _ in range(25):
            steps = [rng.randint(0, 1) for _ in range(rng.randint(1, 6))]
            p = FrequencySequence(tuple(itertools.accumulate(steps)))
            g = p.graph()
            oracle = LanguageOracle(2, lambda w, p=p: member_frequency(p, w))
            for n in range(13):
                a = count_via_graph(g, n)
                assert a == count_frequency(p, n, "brute") == len(enumerate_language(oracle, n))
        for _ in range(25):
            r = rng.randint(1, 4)
            words = {tuple(rng.randint(0, 1) for _ in range(rng.randint(1, r)))
                     for _ in range(rng.randint(0, 4))}
            sft = Sft1D(2, frozenset(words))
            g = sft.graph()
            member = lambda w, sft=sft: sft_language_member(2, sft.forbidden, w)
            for n in range(1, 13):
                assert count_via_graph(g, n) == count_by_extension(member, 2, n)
                assert count_via_graph(g, n) == len(
                    enumerate_language(LanguageOracle(2, member), n))
        g = GOLDEN.graph()
        for n in range(1, 9):
            for w in itertools.product((0, 1), repeat=n):
                verdict = member_by_listing(GOLDEN, w, n + 8)
                if verdict != "inconclusive":
                    assert (verdict == "in") == g.accepts(w), w


def test_c10_entropy_sandwich(capsys):
    with criterion(10, "entropy sandwich for 10 stage pairs, N <= 10", 30, capsys):
        rng = random.Random(7)
        pairs = 0
        while pairs < 10:
            N = rng.randint(2, 10)
            steps = [1] + [rng.randint(0, 1) for _ in range(N - 2)] + [1]
            p = FrequencySequence(tuple(itertools.accumulate(steps)))
            lowered = p.lower_top()
            bits = 16
            e_p = entropy_enclosure(p, bits)
            e_low = entropy_enclosure(lowered, bits)
            log_n_over_n = log2_bounds(Fraction(N), 40)[0] / N
            width = max(e_p.width, e_low.width)
            assert e_low.lower <= e_p.upper
            assert e_p.lower <= e_low.upper + log_n_over_n + 2 * width
            pairs += 1
