"""Frequency subshifts: binary shifts where a length-m window has at most p_m ones.

A :class:`FrequencySequence` stores a finite prefix ``p_1..p_N`` in unit-step
normal form; beyond ``N`` the sequence continues with ``p_m = p_{m-1} + 1``.
Such a prefix defines an SFT of order ``N`` (longer windows are implied), the
*stage SFT*, which is the fast path for counting and entropy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Optional

from .core import ENUMERATION_BUDGET, LanguageOracle, Word, enumerate_language, word_str
from .dyadic import log2_bounds
from .errors import BudgetExceeded, SpectralStall
from .sft import (GRAPH_BUDGET, EntropyInterval, Sft1D, TransferGraph, count_via_graph,
                  graph_from_local_rule, spectral_entropy)


@dataclass(frozen=True)
class FrequencySequence:
    """Stored prefix ``values = (p_1, ..., p_N)`` with unit steps."""

    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        prev = 0
        for m, v in enumerate(vals, start=1):
            if v - prev not in (0, 1):
                raise ValueError(
                    f"p_{m} - p_{m - 1} = {v - prev}; use FrequencySequence.normalize "
                    "for sequences that are not in unit-step form")
            prev = v

    @classmethod
    def normalize(cls, raw: Iterable[int]) -> "FrequencySequence":
        """Unit-step sequence defining the same subshift as ``raw``.

        A window of length m sits inside longer windows (so the tightest
        constraint is the minimum over m' >= m) and a window of length m has at
        most one more one than a window of length m - 1.
        """
        raw = [int(v) for v in raw]
        if any(v < 0 for v in raw):
            raise ValueError("negative frequency bound: the subshift would be empty")
        suffix_min = raw[:]
        for m in range(len(raw) - 2, -1, -1):
            suffix_min[m] = min(raw[m], suffix_min[m + 1])
        out, prev = [], 0
        for v in suffix_min:
            prev = min(v, prev + 1)
            out.append(prev)
        return cls(tuple(out))

    @property
    def N(self) -> int:
        return len(self.values)

    def __call__(self, m: int) -> int:
        """p_m with the tacit unit-step extension; p_0 = 0."""
        if m <= 0:
            return 0
        if m <= self.N:
            return self.values[m - 1]
        return (self.values[-1] if self.values else 0) + (m - self.N)

    def prefix(self, length: int) -> tuple:
        return tuple(self(m) for m in range(1, length + 1))

    @property
    def effective_order(self) -> int:
        """Largest m with a flat step p_m = p_{m-1}; windows beyond it are implied."""
        last = 0
        for m in range(1, self.N + 1):
            if self(m) == self(m - 1):
                last = m
        return last

    def ends_admissibly(self, w: Word) -> bool:
        ones = 0
        n = len(w)
        for m in range(1, min(n, self.effective_order) + 1):
            ones += w[n - m]
            if ones > self(m):
                return False
        return True

    def graph(self, budget: int = GRAPH_BUDGET) -> TransferGraph:
        order = max(self.effective_order, 1)
        return graph_from_local_rule(2, order, self.ends_admissibly, state_budget=budget)

    def to_sft1d(self, budget: int = ENUMERATION_BUDGET) -> Sft1D:
        """Explicit forbidden-word form (only practical for small orders)."""
        words = set()
        for m in range(1, self.effective_order + 1):
            if self(m) == self(m - 1):
                words |= forbidden_set(self, m, budget=budget)
        return Sft1D(2, frozenset(words))

    def oracle(self) -> LanguageOracle:
        return LanguageOracle(2, lambda w: member_frequency(self, w),
                              name=f"frequency{list(self.values)}",
                              counter=lambda n: count_frequency(self, n, "graph"))

    def lower_top(self) -> "FrequencySequence":
        """The sequence p' with p'_N = p_{N-1}, all other entries unchanged."""
        if self.N < 2:
            raise ValueError("lowering the top index needs a stored prefix of length >= 2")
        return FrequencySequence(self.values[:-1] + (self(self.N - 1),))

    def extended(self, steps: Iterable[int]) -> "FrequencySequence":
        """Append unit (1) or flat (0) steps."""
        vals = list(self.values)
        for s in steps:
            vals.append((vals[-1] if vals else 0) + int(s))
        return FrequencySequence(tuple(vals))


def golden_mean_sequence() -> FrequencySequence:
    return FrequencySequence((1, 1))


def forbidden_set(p: FrequencySequence, n: int, *, budget: int = ENUMERATION_BUDGET) -> set:
    """All length-n binary words with more than p_n ones."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if 2 ** n > budget:
        raise BudgetExceeded(f"forbidden set of length {n} needs 2^{n} candidates",
                             required=2 ** n, budget=budget)
    bound = p(n)
    return {w for w in itertools.product((0, 1), repeat=n) if sum(w) > bound}


def member_frequency(p: FrequencySequence, w) -> bool:
    """Every window of every length m <= |w| carries at most p_m ones."""
    w = tuple(w)
    if any(a not in (0, 1) for a in w):
        return False
    prefix = [0]
    for a in w:
        prefix.append(prefix[-1] + a)
    n = len(w)
    for m in range(1, n + 1):
        bound = p(m)
        if bound >= m:
            continue
        if max(prefix[i + m] - prefix[i] for i in range(n - m + 1)) > bound:
            return False
    return True


def count_frequency(p: FrequencySequence, n: int, method: str = "graph", *,
                    budget: Optional[int] = None) -> int:
    if method == "brute":
        return len(enumerate_language(
            LanguageOracle(2, lambda w: member_frequency(p, w)), n,
            budget=budget or ENUMERATION_BUDGET))
    if method == "graph":
        return count_via_graph(p.graph(budget or GRAPH_BUDGET), n)
    raise ValueError(f"unknown counting method {method!r}")


def cap_map(w, N: int, reading: str = "half_open") -> Word:
    """Zero the first one of each length-N block of ``w``.

    ``half_open`` blocks are ``[N*l, N*(l+1))``; ``shared`` blocks are the
    closed windows ``[N*l, N*(l+1)]`` clipped to the word, so neighbouring
    blocks share their boundary index. Blocks without a one are untouched.
    """
    w = tuple(w)
    if N < 1 or len(w) % N:
        raise ValueError(f"word length {len(w)} is not a positive multiple of N={N}")
    if reading not in ("half_open", "shared"):
        raise ValueError(f"unknown block reading {reading!r}")
    out = list(w)
    extra = 1 if reading == "shared" else 0
    for ell in range(len(w) // N):
        hi = min(N * (ell + 1) - 1 + extra, len(w) - 1)
        for i in range(N * ell, hi + 1):
            if w[i] == 1:
                out[i] = 0
                break
    return tuple(out)


@dataclass(frozen=True)
class HaltingPredicate:
    """``step_query(k)`` is True once the machine has halted within k steps."""

    step_query: Callable[[int], bool]

    def __call__(self, k: int) -> bool:
        return bool(self.step_query(k))

    @classmethod
    def never(cls) -> "HaltingPredicate":
        return cls(lambda k: False)

    @classmethod
    def halts_at(cls, steps: int) -> "HaltingPredicate":
        return cls(lambda k: k >= steps)


def freq_from_predicate(pred: HaltingPredicate, N: int) -> FrequencySequence:
    """p_1 = 1, then flat while the machine has halted, unit step otherwise."""
    if N < 1:
        raise ValueError("N must be at least 1")
    vals = [1]
    for k in range(2, N + 1):
        vals.append(vals[-1] if pred(k) else vals[-1] + 1)
    return FrequencySequence(tuple(vals))


# ---------------------------------------------------------------------------
# Entropy enclosures for stage SFTs

def binomial_upper_bound(p: FrequencySequence, bits: int = 24) -> Fraction:
    """min over m <= N of log2(sum_{k <= p_m} C(m, k)) / m, rounded up.

    Any word of L_m has at most p_m ones, so each term bounds h_top from above.
    """
    best = Fraction(1)
    for m in range(1, max(p.effective_order, 1) + 1):
        total = sum(comb(m, k) for k in range(min(p(m), m) + 1))
        _, hi = log2_bounds(Fraction(total), bits)
        best = min(best, hi / m)
    return best


def _window_bound_ok(p: FrequencySequence, sub: tuple) -> bool:
    """True if the frequency shift of prefix ``sub`` is contained in Sigma_p."""
    M, N = len(sub), max(p.effective_order, 1)
    U = [0] + list(sub)
    for m in range(M + 1, N + 1):
        U.append(min(U[j] + U[m - j] for j in range(1, M + 1)))
    return all(U[m] <= p(m) for m in range(1, N + 1))


def subshift_lower_bound(p: FrequencySequence, *, target: Optional[Fraction] = None,
                         state_budget: int = 1500, bits: int = 14,
                         orders: Optional[Iterable[int]] = None) -> Fraction:
    """Certified lower bound on h_top(Sigma_p) from small sub-SFTs.

    For an order M and cap c, the frequency shift with prefix
    ``min(p_m, c)``, m <= M, is contained in Sigma_p whenever splitting a long
    window into pieces of length <= M never exceeds p. Its entropy, from an
    exact spectral enclosure, bounds h_top(Sigma_p) from below.
    """
    N = max(p.effective_order, 1)
    best = Fraction(0)
    for M in orders or range(2, min(N, 48) + 1):
        cap = None
        for c in range(min(p(M), M), -1, -1):
            sub = tuple(min(p(m), c) for m in range(1, M + 1))
            if _window_bound_ok(p, sub):
                cap = sub
                break
        if cap is None:
            continue
        sub = FrequencySequence.normalize(cap)
        estimate = sum(comb(M - 1, k) for k in range(min(sub(M), M - 1) + 1))
        if estimate > 8 * state_budget:
            break
        try:
            enc = spectral_entropy(sub.graph(state_budget), bits, max_iter=20_000)
        except (BudgetExceeded, SpectralStall):
            continue
        best = max(best, enc.lower)
        if target is not None and best >= target:
            break
    return best


def entropy_enclosure(p: FrequencySequence, bits: int, *,
                      state_budget: int = 4096) -> EntropyInterval:
    """Exact spectral enclosure of h_top(Sigma_p) of width <= 2**-bits."""
    return spectral_entropy(p.graph(state_budget), bits)
