"""Words, membership oracles, exact word counting and irreducibility checks.

A word is a plain ``tuple`` of symbol indices in ``range(q)``. A
:class:`LanguageOracle` wraps a total membership decision for the language
of a one-dimensional subshift; everything else in the package is built on
top of it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .dyadic import log2_bounds
from .errors import BudgetExceeded, EmptySubshiftError, SubshiftError

Word = tuple

#: Default cap on the number of candidate words an enumeration may touch.
ENUMERATION_BUDGET = 1 << 24


def word(text_or_seq) -> Word:
    """Build a word from ``"0101"`` or any sequence of ints."""
    if isinstance(text_or_seq, str):
        return tuple(int(c) for c in text_or_seq)
    return tuple(int(c) for c in text_or_seq)


def word_str(w: Sequence[int]) -> str:
    return "".join(str(a) for a in w)


def factors(w: Word) -> Iterator[Word]:
    """Every contiguous subword of ``w`` (with repetitions), empty word included."""
    yield ()
    for i in range(len(w)):
        for j in range(i + 1, len(w) + 1):
            yield w[i:j]


@dataclass(frozen=True)
class LanguageOracle:
    """Membership decision for the language of a subshift over ``range(q)``.

    ``counter`` is an optional exact fast path for ``|L_n|``; when present it
    must agree with brute-force enumeration.
    """

    alphabet_size: int
    membership: Callable[[Word], bool]
    name: str = "oracle"
    counter: Optional[Callable[[int], int]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise ValueError("alphabet size must be at least 2")

    def __call__(self, w) -> bool:
        w = tuple(w)
        if any(not 0 <= a < self.alphabet_size for a in w):
            return False
        return bool(self.membership(w))


def full_shift(q: int = 2) -> LanguageOracle:
    return LanguageOracle(q, lambda w: True, name=f"full_shift({q})", counter=lambda n: q ** n)


def golden_mean() -> LanguageOracle:
    def member(w):
        return all(not (a == 1 and b == 1) for a, b in zip(w, w[1:]))

    return LanguageOracle(2, member, name="golden_mean")


def two_point() -> LanguageOracle:
    """The subshift {0^inf, 1^inf}: only constant words."""
    return LanguageOracle(2, lambda w: len(set(w)) <= 1, name="two_point",
                          counter=lambda n: 1 if n == 0 else 2)


def zero_point() -> LanguageOracle:
    """The single configuration 0^inf."""
    return LanguageOracle(2, lambda w: all(a == 0 for a in w), name="zero_point",
                          counter=lambda n: 1)


def _check_budget(q: int, n: int, budget: int) -> None:
    if q ** n > budget:
        raise BudgetExceeded(
            f"enumerating words of length {n} over {q} symbols needs {q}^{n} candidates "
            f"(budget {budget})",
            required=q ** n, budget=budget,
        )


def enumerate_language(oracle: LanguageOracle, n: int, *, budget: int = ENUMERATION_BUDGET,
                       prune: bool = True) -> list[Word]:
    """All words of length ``n`` accepted by ``oracle``, in lexicographic order.

    With ``prune`` a word is only extended if the oracle accepts it, which is
    sound because languages are factorial.
    """
    if n < 0:
        raise ValueError("word length must be nonnegative")
    q = oracle.alphabet_size
    _check_budget(q, n, budget)
    if not prune:
        return [w for w in itertools.product(range(q), repeat=n) if oracle(w)]
    level: list[Word] = [()] if oracle(()) else []
    for _ in range(n):
        level = [w + (a,) for w in level for a in range(q) if oracle(w + (a,))]
    return level


@dataclass(frozen=True)
class CountTable:
    """Exact values ``|L_n|`` for ``n = 0 .. len(counts) - 1``."""

    counts: tuple

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1


def count_language(oracle: LanguageOracle, n_max: int, *,
                   budget: int = ENUMERATION_BUDGET) -> CountTable:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    _check_budget(oracle.alphabet_size, n_max, budget)
    q = oracle.alphabet_size
    level: list[Word] = [()] if oracle(()) else []
    counts = [len(level)]
    for _ in range(n_max):
        level = [w + (a,) for w in level for a in range(q) if oracle(w + (a,))]
        counts.append(len(level))
    return CountTable(tuple(counts))


def log_ratio(counts: CountTable, n: int, precision_bits: int) -> Fraction:
    """Rational within ``2**-precision_bits`` of ``log2(counts[n]) / n``."""
    if n < 1 or n > counts.n_max:
        raise ValueError(f"n={n} outside the count table")
    c = counts[n]
    if c == 0:
        raise EmptySubshiftError("no words of length %d: the subshift is empty" % n)
    lo, hi = log2_bounds(Fraction(c), precision_bits)
    return (lo + hi) / (2 * n)


@dataclass(frozen=True)
class IrreducibilityResult:
    holds: bool
    counterexample: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.holds


def check_irreducibility(oracle: LanguageOracle, f_value: int, n: int,
                         connector_mode: str = "all_words", *,
                         budget: int = ENUMERATION_BUDGET) -> IrreducibilityResult:
    """Check that any two words of ``L_n`` glue across a gap.

    ``all_words``: some connector of length ``f_value + 1`` works (the gap must
    strictly exceed ``f_value``). ``zeros_only``: the connector ``0^f_value``
    works, the witness used for frequency subshifts.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if connector_mode not in ("all_words", "zeros_only"):
        raise ValueError(f"unknown connector mode {connector_mode!r}")
    words = enumerate_language(oracle, n, budget=budget)
    if connector_mode == "zeros_only":
        connectors = [(0,) * f_value]
    else:
        gap = f_value + 1
        _check_budget(oracle.alphabet_size, gap, budget)
        connectors = list(itertools.product(range(oracle.alphabet_size), repeat=gap))
    for u in words:
        for v in words:
            if not any(oracle(u + w + v) for w in connectors):
                return IrreducibilityResult(False, (u, v))
    return IrreducibilityResult(True)


def sample_oracle_axioms(oracle: LanguageOracle, max_len: int = 10, samples: int = 200,
                         seed: int = 0) -> None:
    """Opportunistic check of factoriality and extendability.

    Raises :class:`SubshiftError` on the first violation found; passing is
    evidence, not proof.
    """
    rng = random.Random(seed)
    q = oracle.alphabet_size
    for _ in range(samples):
        n = rng.randint(1, max_len)
        w = tuple(rng.randrange(q) for _ in range(n))
        if not oracle(w):
            continue
        for u in factors(w):
            if not oracle(u):
                raise SubshiftError(f"oracle {oracle.name} is not factorial: "
                                    f"accepts {word_str(w)} but rejects {word_str(u)}")
        if not any(oracle((a,) + w) for a in range(q)) or not any(oracle(w + (a,)) for a in range(q)):
            raise SubshiftError(f"oracle {oracle.name} accepts non-extendable {word_str(w)}")
