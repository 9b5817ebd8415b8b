"""Command line entry point: ``subshift-entropy <command> ...``.

Exit codes: 0 success, 2 budget or resource limit, 3 invalid input,
4 a checked property was violated.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .core import (ENUMERATION_BUDGET, check_irreducibility, enumerate_language, golden_mean,
                   two_point)
from .dyadic import log2_bounds
from .errors import EmptySubshiftError, InvalidSpecError, ResourceError
from .estimator import (IrreducibilityRate, certified_entropy, condensation_check, count_words,
                        floor_n_over_log2_squared, halving_inequality_check, upper_semicompute)
from .frequency import FrequencySequence, cap_map, count_frequency, member_frequency
from .realizer import (TargetEntropy, branch_soundness, corridor_monitor, lemma_invariant_holds,
                       realize, unit_steps_hold)
from .sft import GRAPH_BUDGET, count_via_graph, spectral_entropy
from .specfile import ResultRecord, load_spec

EXIT_OK, EXIT_RESOURCE, EXIT_INVALID, EXIT_VIOLATED = 0, 2, 3, 4


class PropertyViolated(Exception):
    def __init__(self, record: ResultRecord):
        super().__init__(record.command)
        self.record = record


def parse_rate(text: str) -> IrreducibilityRate:
    kind, _, arg = text.partition(":")
    try:
        if kind == "const":
            return IrreducibilityRate.constant(int(arg))
        if kind == "linear":
            return IrreducibilityRate.linear(Fraction(arg) if arg else Fraction(1))
        if kind == "logpow":
            return IrreducibilityRate.log_power(Fraction(arg))
    except ValueError as err:
        raise InvalidSpecError(f"bad rate {text!r}: {err}") from None
    raise InvalidSpecError(f"unknown rate {text!r}; use const:c, linear or logpow:eps")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidSpecError(f"not a rational number: {text!r}") from None


def _counts(spec, n_max: int, method: str, budget: int) -> list:
    if method == "brute":
        oracle = spec.oracle("brute")
        return [count_words(oracle, n, budget=budget) for n in range(n_max + 1)]
    graph = spec.graph(min(budget, GRAPH_BUDGET))
    return [count_via_graph(graph, n) for n in range(n_max + 1)]


def cmd_count(args) -> ResultRecord:
    spec = load_spec(args.spec)
    counts = _counts(spec, args.n, args.method, args.budget)
    rec = ResultRecord("count", {"spec": spec.serialize(), "n_max": args.n,
                                 "method": args.method},
                       {"counts": counts}, {"enumeration": args.budget})
    if args.plot:
        rows = []
        for n, c in enumerate(counts[1:], start=1):
            if c:
                lo, hi = log2_bounds(Fraction(c), 40)
                rows.append(f"{n} {float((lo + hi) / 2 / n):.12f}")
        Path(args.plot).write_text("# n log2(count)/n\n" + "\n".join(rows) + "\n")
    return rec


def cmd_entropy(args) -> ResultRecord:
    spec = load_spec(args.spec)
    inputs = {"spec": spec.serialize(), "mode": args.mode}
    if args.mode == "spectral":
        enc = spectral_entropy(spec.graph(min(args.budget, GRAPH_BUDGET)), args.bits)
        inputs["bits"] = args.bits
        results = {"enclosure": [enc.lower, enc.upper], "width_bound": Fraction(1, 1 << args.bits)}
        advisory = {"lower": float(enc.lower), "upper": float(enc.upper)}
    elif args.mode == "upper":
        value = upper_semicompute(spec.oracle(args.method), args.n, budget=args.budget)
        inputs["n"] = args.n
        results = {"upper_bound": value}
        advisory = {"upper_bound": float(value)}
    else:
        rate = parse_rate(args.rate)
        est = certified_entropy(spec.oracle(args.method), rate, args.bits,
                                schedule=args.schedule, budget=args.budget)
        inputs.update(rate=rate.describe(), t=args.bits, schedule=args.schedule)
        results = {"value": est.value, "interval": list(est.interval),
                   "evaluation_length": est.evaluation_length, "exponent": est.exponent,
                   "tail_bound": est.tail_bound, "counts_used": est.counts_used}
        advisory = {"value": float(est.value)}
    return ResultRecord("entropy", inputs, results, {"enumeration": args.budget}, advisory)


def cmd_realize(args) -> ResultRecord:
    alpha = parse_fraction(args.alpha_const)
    try:
        target = TargetEntropy.constant(alpha)
    except ValueError as err:
        raise InvalidSpecError(str(err)) from None
    rate = parse_rate(args.rate)
    state = realize(target, rate, args.stages, until_length=args.until_length)
    history = [r.as_dict() for r in state.history]
    results = {"prefix": list(state.values), "stages": state.stage - 1,
               "unit_steps": unit_steps_hold(state),
               "mixing_invariant": lemma_invariant_holds(state),
               "branch_soundness": branch_soundness(state),
               "corridor": corridor_monitor(state)}
    rec = ResultRecord("realize", {"alpha": alpha, "rate": rate.describe(),
                                   "stages": args.stages, "until_length": args.until_length},
                       results)
    if args.out:
        Path(args.out).write_text(json.dumps(history, sort_keys=True, indent=2) + "\n")
    return rec


# ---------------------------------------------------------------------------
# verify suites

def _unit_step_prefixes(N: int):
    for steps in itertools.product((0, 1), repeat=N):
        yield FrequencySequence(tuple(itertools.accumulate(steps)))


def verify_cap_map(args) -> dict:
    checked = 0
    # p'_N = p_(N-1) needs N >= 2
    for N in range(2, args.n_max + 1):
        for p in _unit_step_prefixes(N):
            lowered = p.lower_top()
            for k in range(1, args.length_max // N + 1):
                words = enumerate_language(p.oracle(), k * N)
                for w in words:
                    checked += 1
                    if not member_frequency(lowered, cap_map(w, N)):
                        return {"holds": False, "checked": checked,
                                "counterexample": {"p": list(p.values), "word": list(w)}}
                small = count_frequency(lowered, k * N)
                if len(words) > N ** k * small:
                    return {"holds": False, "checked": checked,
                            "counterexample": {"p": list(p.values), "length": k * N,
                                               "counts": [len(words), small]}}
    return {"holds": True, "checked": checked}


def verify_halving(args) -> dict:
    rate = IrreducibilityRate.constant(1)
    rows = []
    for n in range(1, args.n_max + 1):
        r = halving_inequality_check(golden_mean(), rate, n)
        rows.append({"n": n, "holds": r.holds, "counts": list(r.counts)})
    control = halving_inequality_check(two_point(), rate, 2)
    ok = all(r["holds"] for r in rows) and not control.holds
    return {"holds": ok, "golden_mean": rows,
            "two_point_control": {"n": 2, "holds": control.holds, "counts": list(control.counts)}}


def verify_condensation(args) -> dict:
    constant = parse_fraction(args.constant)
    families = {"constant": lambda n: 1, "identity": lambda n: n,
                "n_over_log2_squared": floor_n_over_log2_squared}
    report, ok = {}, True
    for name, f in families.items():
        fails = [k for k in range(args.k_max + 1) if not condensation_check(f, k, constant)]
        report[name] = {"failing_k": fails}
        ok = ok and not fails
    return {"holds": ok, "constant": constant, "families": report}


def verify_corridor(args) -> dict:
    state = realize(TargetEntropy.constant(parse_fraction(args.alpha_const)),
                    parse_rate(args.rate), args.stages)
    # observational: the upper corridor is not an invariant
    return {"holds": True, "corridor": corridor_monitor(state),
            "mixing_invariant": lemma_invariant_holds(state)}


def verify_gluing(args) -> dict:
    spec = load_spec(args.spec)
    oracle = spec.oracle("auto")
    rate = parse_rate(args.rate)
    for n in range(1, args.n_max + 1):
        res = check_irreducibility(oracle, rate.f(n), n, "zeros_only")
        if not res.holds:
            u, v = res.counterexample
            return {"holds": False, "n": n, "counterexample": [list(u), list(v)]}
    return {"holds": True, "n_max": args.n_max}


SUITES = {"cap_map_inclusion": verify_cap_map, "halving_inequality": verify_halving,
          "condensation": verify_condensation, "corridor": verify_corridor,
          "gluing": verify_gluing}


def cmd_verify(args) -> ResultRecord:
    results = SUITES[args.suite](args)
    rec = ResultRecord("verify", {"suite": args.suite}, results)
    if not results["holds"]:
        raise PropertyViolated(rec)
    return rec


def cmd_irreducibility(args) -> ResultRecord:
    spec = load_spec(args.spec)
    res = check_irreducibility(spec.oracle(args.method), args.f, args.n, args.connectors,
                               budget=args.budget)
    results = {"holds": res.holds}
    if res.counterexample:
        results["counterexample"] = [list(w) for w in res.counterexample]
    rec = ResultRecord("irreducibility", {"spec": spec.serialize(), "f": args.f, "n": args.n,
                                          "connectors": args.connectors}, results,
                       {"enumeration": args.budget})
    if not res.holds:
        raise PropertyViolated(rec)
    return rec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subshift-entropy",
                                     description="Certified entropy of 1D subshifts.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=ENUMERATION_BUDGET)
    common.add_argument("--method", choices=("auto", "graph", "brute"), default="auto")
    common.add_argument("--out", help="write the history (realize) here")
    common.add_argument("--human", action="store_true", help="also print float renderings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="exact |L_n| for n = 0..N")
    p.add_argument("spec")
    p.add_argument("n", type=int)
    p.add_argument("--plot", help="write (n, log2(count)/n) columns to this file")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("entropy", parents=[common], help="entropy bounds")
    p.add_argument("spec")
    p.add_argument("--mode", choices=("upper", "certified", "spectral"), default="spectral")
    p.add_argument("--bits", type=int, default=20)
    p.add_argument("--n", type=int, default=12, help="length for --mode upper")
    p.add_argument("--rate", default="const:1")
    p.add_argument("--schedule", choices=("tail", "series"), default="tail")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("realize", parents=[common], help="build p with prescribed entropy")
    p.add_argument("--alpha-const", default="1/2")
    p.add_argument("--rate", default="linear")
    p.add_argument("--stages", type=int, default=10)
    p.add_argument("--until-length", type=int)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", parents=[common], help="run a named property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--length-max", type=int, default=12)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--constant", default="1/2")
    p.add_argument("--spec", default="builtin:golden_mean")
    p.add_argument("--rate", default="const:1")
    p.add_argument("--alpha-const", default="1/2")
    p.add_argument("--stages", type=int, default=10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("irreducibility", parents=[common], help="gluing check at one length")
    p.add_argument("spec")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--connectors", choices=("all_words", "zeros_only"), default="all_words")
    p.set_defaults(func=cmd_irreducibility)
    return parser


def _emit(rec: ResultRecord, human: bool) -> None:
    sys.stdout.write(rec.to_json())
    if human and rec.advisory:
        print(json.dumps(rec.advisory, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        rec = args.func(args)
    except PropertyViolated as err:
        _emit(err.record, args.human)
        return EXIT_VIOLATED
    except ResourceError as err:
        print(f"resource limit: {err} (required={err.required}, budget={err.budget}, "
              f"stage={err.stage})", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidSpecError, EmptySubshiftError, ValueError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_INVALID
    _emit(rec, args.human)
    if args.human:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
