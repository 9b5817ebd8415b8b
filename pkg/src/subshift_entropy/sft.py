"""One-dimensional subshifts of finite type.

An :class:`Sft1D` is a finite set of forbidden words. Its
:class:`TransferGraph` has the locally admissible words of length ``r - 1``
as states, trimmed down to the essential subgraph, so paths in the graph
are exactly the globally admissible words. Entropy enclosures come from
Collatz-Wielandt bounds on each strongly connected component, in exact
integer/rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .core import ENUMERATION_BUDGET, LanguageOracle, Word, word, word_str
from .dyadic import log2_bounds
from .errors import BudgetExceeded, EmptySubshiftError, SpectralStall

#: Default cap on ``q**(r-1)``, the number of candidate graph states.
GRAPH_BUDGET = 1 << 20


def _contains(w: Word, u: Word) -> bool:
    n = len(u)
    return any(w[i:i + n] == u for i in range(len(w) - n + 1))


@dataclass(frozen=True)
class Sft1D:
    """SFT given by forbidden words; normalized so no forbidden word contains another."""

    alphabet_size: int
    forbidden: frozenset = frozenset()

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise ValueError("alphabet size must be at least 2")
        words = {word(w) for w in self.forbidden}
        for w in words:
            if not w:
                raise ValueError("forbidden words must be nonempty")
            if any(not 0 <= a < self.alphabet_size for a in w):
                raise ValueError(f"symbol out of range in forbidden word {word_str(w)}")
        minimal = frozenset(
            w for w in words
            if not any(u != w and len(u) <= len(w) and _contains(w, u) for u in words)
        )
        object.__setattr__(self, "forbidden", minimal)

    @property
    def order(self) -> int:
        return max((len(w) for w in self.forbidden), default=1)

    def ends_admissibly(self, w: Word) -> bool:
        """True if no forbidden word occurs as a suffix of ``w``."""
        return not any(len(u) <= len(w) and w[len(w) - len(u):] == u for u in self.forbidden)

    def locally_admissible(self, w: Word) -> bool:
        w = tuple(w)
        return all(self.ends_admissibly(w[:i]) for i in range(1, len(w) + 1))

    def graph(self, budget: int = GRAPH_BUDGET) -> "TransferGraph":
        return build_graph(self, budget=budget)

    def oracle(self, budget: int = GRAPH_BUDGET) -> LanguageOracle:
        g = self.graph(budget)
        return LanguageOracle(self.alphabet_size, lambda w: g.accepts(w),
                              name=f"sft{sorted(word_str(u) for u in self.forbidden)}",
                              counter=lambda n: count_via_graph(g, n))


@dataclass(frozen=True)
class TransferGraph:
    """Trimmed de Bruijn-style presentation of an SFT.

    ``succ[i]`` lists ``(j, symbol)`` pairs: state ``i`` followed by ``symbol``
    leads to state ``j``. States are words of length ``order - 1``.
    """

    alphabet_size: int
    order: int
    states: tuple
    succ: tuple
    index: dict = field(compare=False, repr=False)

    @property
    def is_empty(self) -> bool:
        return not self.states

    @property
    def state_length(self) -> int:
        return self.order - 1

    def adjacency(self) -> list[list[int]]:
        n = len(self.states)
        a = [[0] * n for _ in range(n)]
        for i, out in enumerate(self.succ):
            for j, _ in out:
                a[i][j] += 1
        return a

    def edges(self) -> list[tuple]:
        return [(self.states[i], sym, self.states[j])
                for i, out in enumerate(self.succ) for j, sym in out]

    def accepts(self, w) -> bool:
        """Global admissibility of ``w``: it labels a path in the essential graph."""
        w = tuple(w)
        if self.is_empty:
            return False
        k = self.state_length
        if len(w) < k:
            return any(_contains(s, w) for s in self.states)
        cur = self.index.get(w[:k])
        if cur is None:
            return False
        for a in w[k:]:
            nxt = None
            for j, sym in self.succ[cur]:
                if sym == a:
                    nxt = j
                    break
            if nxt is None:
                return False
            cur = nxt
        return True


def graph_from_local_rule(q: int, order: int, ends_ok: Callable[[Word], bool], *,
                          state_budget: int = GRAPH_BUDGET) -> TransferGraph:
    """Build and trim the transfer graph of an SFT described by a suffix test.

    ``ends_ok(w)`` must report whether ``w`` has no forbidden word as a
    suffix, assuming ``w[:-1]`` is already locally admissible.
    """
    k = order - 1
    level: list[Word] = [()]
    for _ in range(k):
        level = [w + (a,) for w in level for a in range(q) if ends_ok(w + (a,))]
        if len(level) > state_budget:
            raise BudgetExceeded(
                f"transfer graph of order {order} has more than {state_budget} states",
                required=len(level), budget=state_budget)
    states = level
    index = {s: i for i, s in enumerate(states)}
    succ: list[list[tuple]] = [[] for _ in states]
    for i, s in enumerate(states):
        for a in range(q):
            t = s + (a,)
            if ends_ok(t):
                succ[i].append((index[t[1:]], a))
    return _trim(q, order, states, succ)


def _trim(q, order, states, succ) -> TransferGraph:
    n = len(states)
    pred: list[list[int]] = [[] for _ in range(n)]
    outdeg = [0] * n
    indeg = [0] * n
    for i, out in enumerate(succ):
        for j, _ in out:
            pred[j].append(i)
            outdeg[i] += 1
            indeg[j] += 1
    alive = [True] * n
    stack = [i for i in range(n) if indeg[i] == 0 or outdeg[i] == 0]
    while stack:
        i = stack.pop()
        if not alive[i]:
            continue
        alive[i] = False
        for j, _ in succ[i]:
            if alive[j]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        for j in pred[i]:
            if alive[j]:
                outdeg[j] -= 1
                if outdeg[j] == 0:
                    stack.append(j)
    keep = [i for i in range(n) if alive[i]]
    remap = {old: new for new, old in enumerate(keep)}
    new_states = tuple(states[i] for i in keep)
    new_succ = tuple(
        tuple((remap[j], a) for j, a in succ[i] if alive[j]) for i in keep
    )
    return TransferGraph(q, order, new_states, new_succ,
                         {s: i for i, s in enumerate(new_states)})


def build_graph(sft: Sft1D, budget: int = GRAPH_BUDGET) -> TransferGraph:
    q, r = sft.alphabet_size, sft.order
    if q ** (r - 1) > budget:
        raise BudgetExceeded(
            f"SFT of order {r} over {q} symbols needs {q}^{r - 1} candidate states "
            f"(budget {budget})", required=q ** (r - 1), budget=budget)
    return graph_from_local_rule(q, r, sft.ends_admissibly, state_budget=budget)


def member_graph(sft: Sft1D, w, graph: Optional[TransferGraph] = None) -> bool:
    w = tuple(w)
    if not sft.locally_admissible(w):
        return False
    return (graph or build_graph(sft)).accepts(w)


def count_via_graph(graph: TransferGraph, n: int) -> int:
    """Exact ``|L_n|`` for the SFT presented by ``graph``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if graph.is_empty:
        return 0
    k = graph.state_length
    if n < k:
        return len({s[:n] for s in graph.states})
    v = [1] * len(graph.states)
    for _ in range(n - k):
        v = [sum(v[j] for j, _ in out) for out in graph.succ]
    return sum(v)


# ---------------------------------------------------------------------------
# The enumeration-based decision procedure, 1D specialization

def _locally_admissible_words(sft: Sft1D, n: int, budget: int) -> list[Word]:
    level: list[Word] = [()]
    for _ in range(n):
        level = [w + (a,) for w in level for a in range(sft.alphabet_size)
                 if sft.ends_admissibly(w + (a,))]
        if len(level) > budget:
            raise BudgetExceeded(f"more than {budget} locally admissible words of length {n}",
                                 budget=budget)
    return level


def member_by_listing(sft: Sft1D, w, budget_N: int, *,
                      budget: int = ENUMERATION_BUDGET) -> str:
    """Decide membership by listing locally admissible windows of growing length.

    Returns ``"out"`` when no locally admissible window of length ``N`` holds
    ``w`` at its center, ``"in"`` when for some gap every pair of flanking
    length-``r`` blocks seen in the listing is also seen around ``w``, and
    ``"inconclusive"`` when ``budget_N`` is reached first. Assumes the subshift
    is nonempty.
    """
    w = tuple(w)
    if not w:
        raise ValueError("w must be nonempty")
    ell, r = len(w), sft.order
    for N in range(ell, budget_N + 1):
        listing = _locally_admissible_words(sft, N, budget)
        s = (N - ell) // 2
        centered = [x for x in listing if x[s:s + ell] == w]
        if not centered:
            return "out"
        g = 1
        while s - g - r >= 0 and s + ell + g + r <= N:
            def flanks(x, g=g):
                return x[s - g - r:s - g], x[s + ell + g:s + ell + g + r]
            seen = {flanks(x) for x in listing}
            around_w = {flanks(x) for x in centered}
            if seen <= around_w:
                return "in"
            g += 1
    return "inconclusive"


# ---------------------------------------------------------------------------
# Certified entropy

@dataclass(frozen=True)
class EntropyInterval:
    """Exact rational enclosure ``lower <= h_top <= upper`` (base 2)."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty entropy interval")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def strongly_connected_components(succ) -> list[list[int]]:
    """Tarjan's algorithm, iterative. ``succ[i]`` holds ``(j, label)`` pairs."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            out = succ[v]
            if pos < len(out):
                work[-1] = (v, pos + 1)
                u = out[pos][0]
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        u = stack.pop()
                        on_stack[u] = False
                        comp.append(u)
                        if u == v:
                            break
                    comps.append(sorted(comp))
    return comps


def _ratio_bounds(x, y):
    """min and max of y_i / x_i as Fractions."""
    lo_n, lo_d = y[0], x[0]
    hi_n, hi_d = y[0], x[0]
    for xi, yi in zip(x, y):
        if yi * lo_d < lo_n * xi:
            lo_n, lo_d = yi, xi
        if yi * hi_d > hi_n * xi:
            hi_n, hi_d = yi, xi
    return Fraction(lo_n, lo_d), Fraction(hi_n, hi_d)


def perron_bounds(succ_local, rel_width: Fraction, *, max_iter: int = 200_000,
                  precision: int = 64) -> tuple[Fraction, Fraction]:
    """Collatz-Wielandt enclosure of the spectral radius of an irreducible matrix.

    ``succ_local[i]`` lists column indices (with repetition for multi-edges).
    Iterates on ``B = A + I`` (primitive) from the all-ones vector; the vector
    is rescaled by right shifts, which keeps the integers small and does not
    affect validity since the bounds hold for every positive vector.
    """
    n = len(succ_local)
    x = [1] * n
    best_lo, best_hi = Fraction(0), None
    stall = 0
    for _ in range(max_iter):
        y = [xi + sum(x[j] for j in out) for xi, out in zip(x, succ_local)]
        lo, hi = _ratio_bounds(x, y)
        improved = False
        if lo > best_lo:
            best_lo, improved = lo, True
        if best_hi is None or hi < best_hi:
            best_hi, improved = hi, True
        if best_hi - best_lo <= rel_width * (best_lo - 1):
            return best_lo - 1, best_hi - 1
        stall = 0 if improved else stall + 1
        if stall > 50:
            precision *= 2
            stall = 0
        shift = max(y).bit_length() - precision
        x = [max(1, v >> shift) for v in y] if shift > 0 else y
    raise SpectralStall(f"Collatz-Wielandt bounds stalled at width {best_hi - best_lo}")


def spectral_entropy(graph: TransferGraph, precision_bits: int, *,
                     max_iter: int = 200_000) -> EntropyInterval:
    """Certified ``[lower, upper]`` around ``log2`` of the graph's spectral radius.

    The width is at most ``2**-precision_bits``.
    """
    if graph.is_empty:
        raise EmptySubshiftError("the transfer graph is empty: the subshift is empty")
    comps = strongly_connected_components(graph.succ)
    rel = Fraction(1, 1 << (precision_bits + 2))
    lam_lo, lam_hi = Fraction(0), Fraction(0)
    for comp in comps:
        members = set(comp)
        local = {v: i for i, v in enumerate(comp)}
        succ_local = [[local[j] for j, _ in graph.succ[v] if j in members] for v in comp]
        if not any(succ_local):
            continue
        lo, hi = perron_bounds(succ_local, rel, max_iter=max_iter,
                               precision=precision_bits + 32)
        lam_lo, lam_hi = max(lam_lo, lo), max(lam_hi, hi)
    if lam_lo < 1:
        # a nonempty trimmed graph always carries a cycle, so lambda >= 1
        lam_lo = Fraction(1)
    lo, _ = log2_bounds(lam_lo, precision_bits + 3)
    _, hi = log2_bounds(lam_hi, precision_bits + 3)
    return EntropyInterval(max(lo, Fraction(0)), hi)


def sft_from_words(q: int, words: Iterable) -> Sft1D:
    return Sft1D(q, frozenset(word(w) for w in words))
