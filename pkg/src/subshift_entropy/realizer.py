"""Inductive construction of a frequency sequence with prescribed entropy.

Stage n holds p_1..p_F(n) with F(n) = 2n + f(n). The next block
p_F(n)+1..p_F(n+1) is either all flat (the *minus* extension) or all unit
steps (*plus*). Minus is taken only when both

* entropy condition: q_n - 2^-n >= alpha_n, where |h(minus stage) - q_n| <= 2^-n
* mixing condition:  p_F(n) >= 2 p_(n+1)

hold. Flat blocks lower the entropy towards alpha while the mixing
condition keeps 2 p_m <= p_F(m), which makes u 0^f(n) v admissible for any
u, v of length n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

from .errors import BudgetExceeded, SpectralStall, StageUndecided
from .estimator import IrreducibilityRate
from .frequency import (FrequencySequence, binomial_upper_bound, member_frequency,
                        subshift_lower_bound)
from .sft import EntropyInterval, spectral_entropy

#: Stage SFTs with at most this many graph states get an exact enclosure.
EXACT_STATE_BUDGET = 2048


@dataclass(frozen=True)
class TargetEntropy:
    """A Pi_1 target given by its nonincreasing rational approximations alpha_n."""

    alpha: Callable[[int], Fraction]
    label: str = "custom"

    @classmethod
    def constant(cls, value) -> "TargetEntropy":
        value = Fraction(value)
        if not 0 < value <= 1:
            raise ValueError("binary frequency subshifts need 0 < alpha <= 1")
        return cls(lambda n: value, f"const:{value}")

    def __call__(self, n: int) -> Fraction:
        return Fraction(self.alpha(n))


@dataclass(frozen=True)
class StageRecord:
    stage: int
    branch: str                 # "plus" or "minus"
    p_F: int                    # p_F(n) before extending
    p_next: int                 # p_(n+1)
    alpha: Fraction
    mixing_holds: bool
    entropy_holds: Optional[bool]   # None: not needed, mixing already failed
    enclosure: Optional[EntropyInterval]
    q: Optional[Fraction]           # set when the enclosure is 2^-n tight
    method: str                     # how the entropy condition was decided

    def as_dict(self) -> dict:
        def frac(x):
            return None if x is None else {"num": str(x.numerator), "den": str(x.denominator)}
        return {
            "stage": self.stage, "branch": self.branch,
            "p_F": str(self.p_F), "p_next": str(self.p_next),
            "alpha": frac(self.alpha), "mixing_holds": self.mixing_holds,
            "entropy_holds": self.entropy_holds,
            "enclosure": None if self.enclosure is None else
            [frac(self.enclosure.lower), frac(self.enclosure.upper)],
            "q": frac(self.q), "method": self.method,
        }


@dataclass(frozen=True)
class RealizationState:
    p: FrequencySequence
    stage: int
    F: Callable[[int], int] = field(compare=False)
    history: tuple = ()

    @property
    def values(self) -> tuple:
        return self.p.values


def initial_state(rate: IrreducibilityRate) -> RealizationState:
    """p_1 = 1, p_2 = 2, completed with unit steps through F(1)."""
    f = rate.f
    if f(1) != 1:
        raise ValueError("the construction assumes f(1) = 1")

    def F(n):
        return 2 * n + f(n)

    vals = [1, 2]
    while len(vals) < F(1):
        vals.append(vals[-1] + 1)
    return RealizationState(FrequencySequence(tuple(vals)), 1, F)


def stage_subshifts(state: RealizationState) -> tuple:
    """(plus, minus) candidate prefixes through F(n+1)."""
    n, F = state.stage, state.F
    width = F(n + 1) - F(n)
    if width < 1:
        raise ValueError("F must be increasing")
    return state.p.extended([1] * width), state.p.extended([0] * width)


def mixing_condition(state: RealizationState) -> bool:
    n = state.stage
    return state.p(state.F(n)) >= 2 * state.p(n + 1)


def _decide_entropy(minus: FrequencySequence, n: int, alpha: Fraction):
    """Decide q_n - 2^-n >= alpha_n.

    With an enclosure of width <= 2^-n the midpoint is a valid q_n and the
    condition is evaluated literally. Otherwise the bounds must decide it for
    every admissible q_n: h_hi < alpha fails for all of them, and
    h_lo - 2^(1-n) >= alpha holds for all of them.
    """
    eps = Fraction(1, 1 << n)
    try:
        enc = spectral_entropy(minus.graph(EXACT_STATE_BUDGET), n + 1)
    except (BudgetExceeded, SpectralStall):
        enc = None
    if enc is not None:
        q = enc.midpoint
        return q - eps >= alpha, enc, q, "exact"
    hi = binomial_upper_bound(minus)
    if hi < alpha:
        return False, EntropyInterval(Fraction(0), hi), None, "binomial-upper"
    need = alpha + 2 * eps
    lo = subshift_lower_bound(minus, target=need)
    if lo >= need:
        return True, EntropyInterval(lo, hi), None, "sub-sft-lower"
    raise StageUndecided(
        f"stage {n}: entropy bounds [{float(lo):.6f}, {float(hi):.6f}] do not decide "
        f"alpha_n = {alpha}", stage=n)


def evaluate_conditions(state: RealizationState, target: TargetEntropy) -> dict:
    """Both stage conditions, each evaluated (no short-circuit)."""
    n = state.stage
    _, minus = stage_subshifts(state)
    alpha = target(n)
    ent, enc, q, method = _decide_entropy(minus, n, alpha)
    mix = mixing_condition(state)
    return {"entropy": ent, "mixing": mix, "enclosure": enc, "q": q, "method": method,
            "alpha": alpha, "both_hold": ent and mix}


def step(state: RealizationState, target: TargetEntropy) -> RealizationState:
    n, F = state.stage, state.F
    plus, minus = stage_subshifts(state)
    alpha = target(n)
    mix = mixing_condition(state)
    ent = enc = q = None
    method = "skipped"
    if mix:
        ent, enc, q, method = _decide_entropy(minus, n, alpha)
    branch = "minus" if (mix and ent) else "plus"
    record = StageRecord(n, branch, state.p(F(n)), state.p(n + 1), alpha, mix, ent, enc, q,
                         method)
    new = RealizationState(minus if branch == "minus" else plus, n + 1, F,
                           state.history + (record,))
    if 2 * new.p(n + 1) > new.p(F(n + 1)):
        raise AssertionError(f"stage {n}: 2 p_(n+1) <= p_F(n+1) violated")
    return new


def realize(target: TargetEntropy, rate: IrreducibilityRate, stages: int, *,
            until_length: Optional[int] = None) -> RealizationState:
    """Run the construction for ``stages`` stages, or until the prefix has
    length ``>= until_length`` when that is given."""
    state = initial_state(rate)
    done = 0
    while True:
        if until_length is not None:
            if state.p.N >= until_length:
                break
        elif done >= stages:
            break
        try:
            state = step(state, target)
        except (BudgetExceeded, SpectralStall, StageUndecided) as err:
            err.stage = state.stage
            raise
        done += 1
    return state


def lemma_invariant_holds(state: RealizationState) -> bool:
    """2 p_m <= p_F(m) for every completed stage m."""
    return all(2 * state.p(m) <= state.p(state.F(m)) for m in range(1, state.stage + 1))


def unit_steps_hold(state: RealizationState) -> bool:
    vals = (0,) + state.values
    return all(b - a in (0, 1) for a, b in zip(vals, vals[1:]))


def branch_soundness(state: RealizationState) -> bool:
    for rec in state.history:
        if rec.branch == "minus" and not (rec.mixing_holds and rec.entropy_holds):
            return False
        if rec.branch == "plus" and rec.mixing_holds and rec.entropy_holds:
            return False
    return True


def corridor_monitor(state: RealizationState) -> list:
    """Per completed stage: does p_F(n) <= 2 p_n + 3 hold? Observational only."""
    return [state.p(state.F(m)) <= 2 * state.p(m) + 3 for m in range(1, state.stage + 1)]


def gluing_holds(p: FrequencySequence, n: int, gap: int) -> bool:
    """u 0^gap v is admissible for all u, v in L_n(Sigma_p)."""
    words = [w for w in product((0, 1), repeat=n) if member_frequency(p, w)]
    zeros = (0,) * gap
    return all(member_frequency(p, u + zeros + v) for u in words for v in words)


@dataclass(frozen=True)
class LiftCertificate:
    dimension: int
    p: FrequencySequence
    statement: str

    def member_box(self, rows) -> bool:
        """Row-wise membership for a finite box given as a list of rows."""
        return all(member_frequency(self.p, row) for row in rows)


def lift_to_dimension(state, d: int) -> LiftCertificate:
    """Describe the row lift of Sigma_p to Z^d (no d-dimensional engine)."""
    if d < 2:
        raise ValueError("lift dimension must be at least 2")
    p = state.p if isinstance(state, RealizationState) else state
    return LiftCertificate(
        d, p,
        f"configurations of {{0,1}}^(Z^{d}) whose every line along the first axis lies "
        f"in Sigma_p; same entropy, irreducibility rate and decidability as Sigma_p")
