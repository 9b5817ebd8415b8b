"""Line-oriented subshift descriptions and exact result records.

A spec file looks like::

    subshift-spec 1
    kind: sft
    alphabet: 2
    forbidden: 11 101

``kind: frequency`` takes ``prefix: 1 1 2`` (and an optional
``extension: unit``, the only supported tail); ``kind: builtin`` takes
``name:`` and, for ``full_shift``, ``q:``. Blank lines and ``#`` comments
are ignored. The inline shorthands ``builtin:golden_mean``,
``builtin:full_shift:3``, ``frequency:1,1,2`` and ``sft:2:11,101`` are
accepted wherever a spec is expected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .core import LanguageOracle, full_shift, golden_mean, two_point, word, word_str, zero_point
from .errors import InvalidSpecError
from .frequency import FrequencySequence
from .sft import Sft1D, TransferGraph

VERSION = 1
HEADER = f"subshift-spec {VERSION}"

# builtins that are SFTs get their forbidden words, so the graph fast path applies
_BUILTIN_SFT = {
    "golden_mean": lambda q: Sft1D(2, frozenset({(1, 1)})),
    "two_point": lambda q: Sft1D(2, frozenset({(0, 1), (1, 0)})),
    "zero_point": lambda q: Sft1D(2, frozenset({(1,)})),
    "full_shift": lambda q: Sft1D(q, frozenset()),
}
_BUILTIN_ORACLE = {
    "golden_mean": lambda q: golden_mean(),
    "two_point": lambda q: two_point(),
    "zero_point": lambda q: zero_point(),
    "full_shift": full_shift,
}


@dataclass(frozen=True)
class SubshiftSpec:
    kind: str
    alphabet_size: int = 2
    forbidden: tuple = ()
    prefix: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("sft", "frequency", "builtin"):
            raise InvalidSpecError(f"unknown kind {self.kind!r}")
        if self.kind == "builtin" and self.name not in _BUILTIN_SFT:
            raise InvalidSpecError(f"unknown builtin {self.name!r}; "
                                   f"known: {', '.join(sorted(_BUILTIN_SFT))}")
        if self.alphabet_size < 2:
            raise InvalidSpecError("alphabet size must be at least 2")
        try:
            if self.kind == "sft":
                Sft1D(self.alphabet_size, frozenset(self.forbidden))
            elif self.kind == "frequency":
                FrequencySequence(self.prefix)
        except ValueError as err:
            raise InvalidSpecError(str(err)) from err

    def sft(self) -> Optional[Sft1D]:
        if self.kind == "sft":
            return Sft1D(self.alphabet_size, frozenset(self.forbidden))
        if self.kind == "builtin":
            return _BUILTIN_SFT[self.name](self.alphabet_size)
        return None

    def frequency(self) -> Optional[FrequencySequence]:
        return FrequencySequence(self.prefix) if self.kind == "frequency" else None

    def graph(self, budget: int) -> TransferGraph:
        if self.kind == "frequency":
            return self.frequency().graph(budget)
        return self.sft().graph(budget)

    def oracle(self, method: str = "auto") -> LanguageOracle:
        """Membership oracle.

        ``auto`` and ``graph`` count through the transfer graph; ``brute`` uses
        direct membership with no counting fast path.
        """
        if method not in ("auto", "graph", "brute"):
            raise InvalidSpecError(f"unknown method {method!r}")
        if self.kind == "frequency":
            base = self.frequency().oracle()
            if method == "brute":
                return LanguageOracle(2, base.membership, name=base.name)
            return base
        if method == "brute":
            if self.kind == "builtin":
                base = _BUILTIN_ORACLE[self.name](self.alphabet_size)
                return LanguageOracle(base.alphabet_size, base.membership, name=base.name)
            base = self.sft().oracle()
            return LanguageOracle(base.alphabet_size, base.membership, name=base.name)
        return self.sft().oracle()

    def normalized(self) -> "SubshiftSpec":
        if self.kind == "sft":
            words = tuple(sorted(self.sft().forbidden, key=lambda w: (len(w), w)))
            return SubshiftSpec("sft", self.alphabet_size, forbidden=words)
        if self.kind == "builtin":
            q = self.alphabet_size if self.name == "full_shift" else 2
            return SubshiftSpec("builtin", q, name=self.name)
        return self

    def serialize(self) -> str:
        s = self.normalized()
        lines = [HEADER, f"kind: {s.kind}"]
        if s.kind == "sft":
            lines += [f"alphabet: {s.alphabet_size}",
                      "forbidden: " + " ".join(word_str(w) for w in s.forbidden)]
        elif s.kind == "frequency":
            lines += ["prefix: " + " ".join(str(v) for v in s.prefix), "extension: unit"]
        else:
            lines.append(f"name: {s.name}")
            if s.name == "full_shift":
                lines.append(f"q: {s.alphabet_size}")
        return "\n".join(lines) + "\n"


def _parse_word(token: str, q: int) -> tuple:
    if not token.isdigit():
        raise InvalidSpecError(f"forbidden word {token!r} is not a digit string")
    w = word(token)
    if any(a >= q for a in w):
        raise InvalidSpecError(f"forbidden word {token!r} uses a symbol outside 0..{q - 1}")
    return w


def _parse_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise InvalidSpecError(f"{key}: expected an integer, got {value!r}") from None


def parse_spec(text: str) -> SubshiftSpec:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split() != ["subshift-spec", str(VERSION)]:
        raise InvalidSpecError(f"missing or unsupported header (expected {HEADER!r})")
    fields = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise InvalidSpecError(f"expected 'key: value', got {ln!r}")
        key, value = (part.strip() for part in ln.split(":", 1))
        if key in fields:
            raise InvalidSpecError(f"duplicate key {key!r}")
        fields[key] = value
    kind = fields.pop("kind", None)
    if kind == "sft":
        q = _parse_int(fields.pop("alphabet", "2"), "alphabet")
        words = tuple(_parse_word(t, q) for t in fields.pop("forbidden", "").split())
        spec = SubshiftSpec("sft", q, forbidden=words)
    elif kind == "frequency":
        if "prefix" not in fields:
            raise InvalidSpecError("frequency spec needs a prefix")
        prefix = tuple(_parse_int(t, "prefix") for t in fields.pop("prefix").split())
        ext = fields.pop("extension", "unit")
        if ext != "unit":
            raise InvalidSpecError(f"unsupported extension {ext!r}; only 'unit' is defined")
        spec = SubshiftSpec("frequency", 2, prefix=prefix)
    elif kind == "builtin":
        name = fields.pop("name", "")
        q = _parse_int(fields.pop("q", "2"), "q")
        spec = SubshiftSpec("builtin", q, name=name)
    else:
        raise InvalidSpecError(f"unknown or missing kind {kind!r}")
    if fields:
        raise InvalidSpecError(f"unexpected keys for kind {kind}: {', '.join(sorted(fields))}")
    return spec


def parse_inline(text: str) -> SubshiftSpec:
    head, _, rest = text.partition(":")
    if head == "builtin":
        name, _, q = rest.partition(":")
        return SubshiftSpec("builtin", _parse_int(q, "q") if q else 2, name=name)
    if head == "frequency":
        return SubshiftSpec("frequency", 2,
                            prefix=tuple(_parse_int(t, "prefix") for t in rest.split(",") if t))
    if head == "sft":
        q_text, _, words = rest.partition(":")
        q = _parse_int(q_text, "alphabet")
        return SubshiftSpec("sft", q, forbidden=tuple(_parse_word(t, q)
                                                      for t in words.split(",") if t))
    raise InvalidSpecError(f"cannot read subshift {text!r}")


def load_spec(arg: str) -> SubshiftSpec:
    """A spec file path or an inline shorthand."""
    path = Path(arg)
    if path.is_file():
        return parse_spec(path.read_text())
    return parse_inline(arg)


# ---------------------------------------------------------------------------
# Exact result records

def exact(x):
    """JSON-safe exact rendering: ints as decimal strings, rationals as num/den."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    raise TypeError(f"no exact rendering for {type(x).__name__}")


def read_exact(x):
    """Inverse of :func:`exact` for numbers."""
    if isinstance(x, dict) and set(x) == {"num", "den"}:
        return Fraction(int(x["num"]), int(x["den"]))
    if isinstance(x, str) and x.lstrip("-").isdigit():
        return int(x)
    if isinstance(x, list):
        return [read_exact(v) for v in x]
    return x


@dataclass
class ResultRecord:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    advisory: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        return {"command": self.command, "inputs": exact(self.inputs),
                "results": exact(self.results), "budget": exact(self.budget)}

    def to_json(self) -> str:
        """Byte-stable canonical JSON (advisory floats and timings excluded)."""
        return json.dumps(self.canonical(), sort_keys=True, indent=2) + "\n"
