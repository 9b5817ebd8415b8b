"""Entropy of decidable subshifts from word counts.

``upper_semicompute`` gives a nonincreasing sequence of rational upper bounds
converging to h_top for any decidable subshift. ``certified_entropy`` turns
an irreducibility rate with a computable tail bound into a 2**-t certificate
by counting words at a single dyadic length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import log2 as float_log2
from typing import Callable, Optional

from .core import ENUMERATION_BUDGET, LanguageOracle, enumerate_language
from .dyadic import ceil_exp_plus_one, ln_bounds, log2_bounds, rational_power_bounds
from .errors import BudgetExceeded, EmptySubshiftError, ResourceError


def count_words(oracle: LanguageOracle, n: int, *, budget: int = ENUMERATION_BUDGET) -> int:
    """|L_n|, through the oracle's exact fast path when it has one."""
    if oracle.counter is not None:
        return oracle.counter(n)
    return len(enumerate_language(oracle, n, budget=budget))


def _floor_log_power(n: int, eps: Fraction) -> int:
    """floor(n / log2(n)**(1 + eps)) exactly; 1 at n = 1 where log2 vanishes."""
    if n < 2:
        return 1
    a = 1 + Fraction(eps)

    def fits(v: int) -> bool:
        # v * log2(n)^a <= n, refined until the enclosure decides
        if v <= 0:
            return True
        bits = 32
        while True:
            l_lo, l_hi = log2_bounds(Fraction(n), bits)
            p_lo, _ = rational_power_bounds(l_lo, a, bits)
            _, p_hi = rational_power_bounds(l_hi, a, bits)
            if v * p_hi <= n:
                return True
            if v * p_lo > n:
                return False
            bits *= 2

    v = int(n / float_log2(n) ** float(a))
    while not fits(v):
        v -= 1
    while fits(v + 1):
        v += 1
    return v


@dataclass(frozen=True)
class IrreducibilityRate:
    """Gap function f with a bound T(n) >= sum_{k >= n} f(2^k) / 2^(k+1).

    ``tail_bound`` is None when the series diverges (no certificate possible).
    """

    f: Callable[[int], int]
    tail_bound: Optional[Callable[[int], Fraction]]
    family: str
    params: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, c: int) -> "IrreducibilityRate":
        c = int(c)
        return cls(lambda n: c, lambda n: Fraction(c) / Fraction(2) ** (n - 1),
                   "constant", {"c": c})

    @classmethod
    def linear(cls, slope: Fraction = Fraction(1)) -> "IrreducibilityRate":
        slope = Fraction(slope)
        return cls(lambda n: (slope.numerator * n) // slope.denominator, None,
                   "linear", {"slope": slope})

    @classmethod
    def log_power(cls, eps) -> "IrreducibilityRate":
        """f(n) = floor(n / log2(n)^(1+eps)).

        f(2^k) <= 2^k / k^(1+eps), so the dyadic tail is at most
        (1/2) sum_{k >= n} k^-(1+eps) <= 1 / (2 eps (n-1)^eps) for n >= 2.
        """
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")

        def tail(n: int) -> Fraction:
            if n < 2:
                return Fraction(10 ** 9)
            return 1 / (2 * eps * rational_power_bounds(Fraction(n - 1), eps, 32)[0])

        return cls(lambda n: _floor_log_power(n, eps), tail, "log_power", {"eps": eps})

    @classmethod
    def custom(cls, f, tail_bound=None) -> "IrreducibilityRate":
        return cls(f, tail_bound, "custom")

    def describe(self) -> str:
        if self.family == "constant":
            return f"const:{self.params['c']}"
        if self.family == "linear":
            return f"linear:{self.params['slope']}"
        if self.family == "log_power":
            return f"logpow:{self.params['eps']}"
        return "custom"


@dataclass(frozen=True)
class EntropyEstimate:
    value: Fraction
    precision_bits: int
    evaluation_length: int
    exponent: int
    tail_bound: Fraction
    counts_used: dict

    @property
    def interval(self) -> tuple:
        eps = Fraction(1, 1 << self.precision_bits)
        return self.value - eps, self.value + eps


def upper_semicompute(oracle: LanguageOracle, n: int, *,
                      budget: int = ENUMERATION_BUDGET) -> Fraction:
    """min over m <= n of an upper rounding of log2(|L_m|)/m.

    Each term is at most 2**-m above log2(|L_m|)/m and never below it, so the
    values are upper bounds on h_top, nonincreasing in n, with infimum h_top.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    best = None
    for m in range(1, n + 1):
        c = count_words(oracle, m, budget=budget)
        if c == 0:
            raise EmptySubshiftError("the subshift is empty")
        _, hi = log2_bounds(Fraction(c), m)
        r = hi / m
        best = r if best is None else min(best, r)
    return best


def tail_bound_log_power(eps, n: int) -> Fraction:
    """Rational upper bound on sum_{k >= n} 1/(k ln(k)^(1+eps)).

    Uses the integral bound 1/(eps ln(n-1)^eps) with ln(n-1) rounded down and
    the power rounded down, so the returned value is a valid upper bound.
    """
    eps = Fraction(eps)
    if n <= 2:
        raise ValueError("the log-power tail bound needs n >= 3")
    if eps <= 0:
        raise ValueError("eps must be positive")
    ln_lo, _ = ln_bounds(Fraction(n - 1), 64)
    power_lo, _ = rational_power_bounds(ln_lo, eps, 64)
    return 1 / (eps * power_lo)


def log_power_schedule(eps, t: int) -> int:
    """ceil(exp((2^t / eps)^(1/eps)) + 1): the series-tail schedule for log-power rates."""
    eps = Fraction(eps)
    base = Fraction(2 ** t) / eps
    # (base)^(1/eps) = (base^den)^(1/num)
    x = base ** eps.denominator
    return ceil_exp_plus_one(x.numerator, x.denominator, eps.numerator)


def _required_exponent(rate: IrreducibilityRate, t: int, max_exponent: int) -> int:
    target = Fraction(1, 1 << (t + 1))
    for n in range(0, max_exponent + 1):
        if rate.tail_bound(n) <= target:
            return n
    raise ResourceError(f"tail bound does not reach 2^-{t + 1} by exponent {max_exponent}",
                        required=None)


def certified_entropy(oracle: LanguageOracle, rate: IrreducibilityRate, t: int, *,
                      schedule: str = "tail", budget: int = ENUMERATION_BUDGET,
                      max_length: int = 1 << 16) -> EntropyEstimate:
    """Rational within 2**-t of h_top, assuming the subshift is rate.f-irreducible.

    Chooses the smallest exponent n whose tail bound is <= 2**-(t+1), counts
    words of length 2**n, and rounds log2(count)/2**n to 2**-(t+1). With
    ``schedule="series"`` (log-power rates) the length is instead the smallest
    power of two >= the series-tail schedule, and the tail bound at that
    exponent is checked to still certify the result.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if rate.tail_bound is None:
        raise ValueError(f"rate {rate.describe()} has no convergent tail bound: "
                         "no certificate is possible")
    series_n = None
    if schedule == "tail":
        exponent = _required_exponent(rate, t, 4096)
    elif schedule == "series":
        if rate.family != "log_power":
            raise ValueError("the series schedule is defined for log-power rates only")
        series_n = log_power_schedule(rate.params["eps"], t)
        exponent = max((series_n - 1).bit_length(), 0)
        if rate.tail_bound(exponent) > Fraction(1, 1 << (t + 1)):
            raise ResourceError("series schedule does not certify this precision",
                                required=series_n)
    else:
        raise ValueError(f"unknown schedule {schedule!r}")
    length = 1 << exponent
    feasible = length <= max_length and (
        oracle.counter is not None or oracle.alphabet_size ** length <= budget)
    if not feasible:
        extra = f" (schedule n(t) = {series_n})" if series_n is not None else ""
        raise BudgetExceeded(
            f"certified entropy at t={t} needs word counts at length 2^{exponent} = "
            f"{length}{extra}; beyond the counting budget",
            required=series_n if series_n is not None else length, budget=budget)
    count = count_words(oracle, length, budget=budget)
    if count == 0:
        raise EmptySubshiftError("the subshift is empty")
    lo, hi = log2_bounds(Fraction(count), t + 1 + exponent)
    value = (lo + hi) / (2 * length)
    counts = {"length": length, "count": count}
    if series_n is not None:
        counts["schedule_n"] = series_n
    return EntropyEstimate(value, t, length, exponent, rate.tail_bound(exponent), counts)


@dataclass(frozen=True)
class HalvingResult:
    holds: bool
    n: int
    f_n: int
    counts: tuple  # (|L_n|, |L_{2n+f(n)}|, |L_{2n}|)

    q: int = 2

    @property
    def left(self) -> bool:
        return self.counts[0] ** 2 <= self.counts[1]

    @property
    def right(self) -> bool:
        return self.counts[1] <= self.q ** self.f_n * self.counts[2]


def halving_inequality_check(oracle: LanguageOracle, rate: IrreducibilityRate, n: int, *,
                             budget: int = ENUMERATION_BUDGET) -> HalvingResult:
    """|L_n|^2 <= |L_{2n+f(n)}| <= q^f(n) |L_{2n}|, as exact integers."""
    fn = rate.f(n)
    c_n = count_words(oracle, n, budget=budget)
    c_glued = count_words(oracle, 2 * n + fn, budget=budget)
    c_2n = count_words(oracle, 2 * n, budget=budget)
    q = oracle.alphabet_size
    holds = c_n ** 2 <= c_glued <= q ** fn * c_2n
    return HalvingResult(holds, n, fn, (c_n, c_glued, c_2n), q)


def condensation_check(f: Callable[[int], int], k: int,
                       constant: Fraction = Fraction(1, 2)) -> bool:
    """f(2^k)/2^(k+1) <= constant * sum_{i=2^k}^{2^(k+1)-1} f(i)/i^2, exactly."""
    lhs = Fraction(f(2 ** k), 2 ** (k + 1))
    rhs = sum((Fraction(f(i), i * i) for i in range(2 ** k, 2 ** (k + 1))), Fraction(0))
    return lhs <= constant * rhs


def floor_n_over_log2_squared(n: int) -> int:
    """floor(n / log2(n)^2), with value 1 at n = 1 where log2 vanishes."""
    return _floor_log_power(n, Fraction(1))


def dyadic_tail(rate: IrreducibilityRate, n: int, terms: int = 64) -> Fraction:
    """Partial sum of f(2^k)/2^(k+1) for k in [n, n + terms), for diagnostics."""
    return sum((Fraction(rate.f(2 ** k), 2 ** (k + 1)) for k in range(n, n + terms)),
               Fraction(0))


__all__ = [
    "IrreducibilityRate", "EntropyEstimate", "HalvingResult", "upper_semicompute",
    "certified_entropy", "tail_bound_log_power", "log_power_schedule",
    "halving_inequality_check", "condensation_check", "count_words",
    "floor_n_over_log2_squared", "dyadic_tail",
]
