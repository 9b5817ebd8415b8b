import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from subshift_entropy.cli import main
from subshift_entropy.errors import InvalidSpecError
from subshift_entropy.specfile import (ResultRecord, SubshiftSpec, exact, load_spec,
                                       parse_inline, parse_spec, read_exact)

from oracles import log2_golden, mp


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


# --- spec files ------------------------------------------------------------

def test_parse_sft_file():
    spec = parse_spec("subshift-spec 1\n# golden mean\nkind: sft\nalphabet: 2\nforbidden: 11 011\n")
    assert spec.sft().forbidden == frozenset({(1, 1)})
    assert spec.serialize() == "subshift-spec 1\nkind: sft\nalphabet: 2\nforbidden: 11\n"


@pytest.mark.parametrize("text", [
    "kind: sft\n",
    "subshift-spec 2\nkind: sft\n",
    "subshift-spec 1\nkind: cube\n",
    "subshift-spec 1\nkind: sft\nalphabet: 2\nforbidden: 12\n",
    "subshift-spec 1\nkind: frequency\nprefix: 1 3\n",
    "subshift-spec 1\nkind: frequency\nprefix: 1 1\nextension: flat\n",
    "subshift-spec 1\nkind: builtin\nname: sierpinski\n",
    "subshift-spec 1\nkind: sft\nkind: sft\n",
    "subshift-spec 1\nkind: sft\ncolour: red\n",
])
def test_invalid_specs(text):
    with pytest.raises(InvalidSpecError):
        parse_spec(text)


sft_specs = st.builds(
    lambda q, words: SubshiftSpec("sft", q, forbidden=tuple(tuple(a % q for a in w) for w in words)),
    st.integers(2, 4), st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=4).map(tuple),
                                max_size=6))
freq_specs = st.lists(st.integers(0, 1), max_size=8).map(
    lambda steps: SubshiftSpec("frequency", 2, prefix=tuple(sum(steps[:i + 1])
                                                            for i in range(len(steps)))))
builtin_specs = st.sampled_from([SubshiftSpec("builtin", 2, name="golden_mean"),
                                 SubshiftSpec("builtin", 3, name="full_shift"),
                                 SubshiftSpec("builtin", 2, name="two_point")])


@given(st.one_of(sft_specs, freq_specs, builtin_specs))
def test_serialize_round_trip(spec):
    again = parse_spec(spec.serialize())
    assert again.normalized() == spec.normalized()
    assert parse_spec(again.serialize()).serialize() == again.serialize()


def test_inline_and_file_loading(tmp_path):
    assert parse_inline("builtin:full_shift:3").alphabet_size == 3
    assert parse_inline("frequency:1,1,2").prefix == (1, 1, 2)
    assert parse_inline("sft:2:11,101").forbidden == ((1, 1), (1, 0, 1))
    path = tmp_path / "gm.spec"
    path.write_text("subshift-spec 1\nkind: builtin\nname: golden_mean\n")
    assert load_spec(str(path)).name == "golden_mean"
    with pytest.raises(InvalidSpecError):
        parse_inline("hexagon:7")


def test_exact_serialization():
    rec = ResultRecord("x", {"a": Fraction(2, 6), "n": 10 ** 30}, {"ok": True})
    data = json.loads(rec.to_json())
    assert data["inputs"]["a"] == {"num": "1", "den": "3"}
    assert data["inputs"]["n"] == str(10 ** 30)
    assert read_exact(exact(Fraction(-7, 3))) == Fraction(-7, 3)
    with pytest.raises(TypeError):
        exact(0.5)


# --- commands --------------------------------------------------------------

def test_count_golden_mean(capsys):
    code, data, _ = run(capsys, "count", "builtin:golden_mean", "8")
    assert code == 0
    assert data["results"]["counts"] == ["1", "2", "3", "5", "8", "13", "21", "34", "55"]


def test_count_methods_agree(capsys):
    outs = []
    for method in ("graph", "brute"):
        code, data, _ = run(capsys, "count", "frequency:1,1", "6", "--method", method)
        assert code == 0
        outs.append(data["results"]["counts"])
    assert outs[0] == outs[1] == ["1", "2", "3", "5", "8", "13", "21"]
    code, data, _ = run(capsys, "count", "builtin:full_shift", "4")
    assert data["results"]["counts"] == ["1", "2", "4", "8", "16"]


def test_count_plot_file(capsys, tmp_path):
    plot = tmp_path / "plot.txt"
    run(capsys, "count", "builtin:golden_mean", "5", "--plot", str(plot))
    rows = plot.read_text().splitlines()
    assert rows[0].startswith("#") and len(rows) == 6
    assert rows[1].split()[0] == "1"


def test_entropy_spectral(capsys):
    code, data, _ = run(capsys, "entropy", "builtin:golden_mean", "--bits", "20")
    lo, hi = (read_exact(x) for x in data["results"]["enclosure"])
    assert code == 0 and hi - lo <= Fraction(1, 2 ** 20)
    assert mp(lo) <= log2_golden() <= mp(hi)


def test_entropy_certified(capsys):
    code, data, _ = run(capsys, "entropy", "builtin:golden_mean", "--mode", "certified",
                        "--rate", "const:1", "--bits", "6")
    value = read_exact(data["results"]["value"])
    assert code == 0 and abs(mp(value) - log2_golden()) <= 2 ** -6


def test_entropy_upper_two_point(capsys):
    code, data, _ = run(capsys, "entropy", "builtin:two_point", "--mode", "upper", "--n", "5")
    assert code == 0 and 0 <= read_exact(data["results"]["upper_bound"]) <= Fraction(1, 4)


def test_resource_exit_code(capsys):
    code, _, err = run(capsys, "entropy", "builtin:golden_mean", "--mode", "certified",
                       "--rate", "logpow:1", "--bits", "3", "--schedule", "series",
                       "--method", "brute")
    assert code == 2 and "2982" in err


def test_invalid_exit_code(capsys):
    code, _, err = run(capsys, "count", "sft:2:2", "3")
    assert code == 3 and "invalid" in err
    code, _, _ = run(capsys, "realize", "--alpha-const", "3/2", "--stages", "1")
    assert code == 3
    code, _, _ = run(capsys, "entropy", "builtin:golden_mean", "--mode", "certified",
                     "--rate", "wobbly")
    assert code == 3


def test_verify_suites(capsys):
    for argv in (["verify", "cap_map_inclusion", "--n-max", "3"],
                 ["verify", "halving_inequality", "--n-max", "6"],
                 ["verify", "gluing", "--n-max", "6"],
                 ["verify", "condensation", "--constant", "2"],
                 ["verify", "corridor", "--stages", "5"]):
        code, data, _ = run(capsys, *argv)
        assert code == 0 and data["results"]["holds"] is True, argv


def test_verify_reports_violations(capsys):
    code, data, _ = run(capsys, "verify", "condensation")
    assert code == 4 and data["results"]["families"]["constant"]["failing_k"]
    code, data, _ = run(capsys, "verify", "gluing", "--spec", "builtin:two_point")
    assert code == 4


def test_irreducibility_command(capsys):
    code, data, _ = run(capsys, "irreducibility", "builtin:golden_mean", "--f", "0", "--n", "4")
    assert code == 0 and data["results"]["holds"] is True
    code, data, _ = run(capsys, "irreducibility", "builtin:two_point", "--f", "3", "--n", "2")
    assert code == 4 and data["results"]["counterexample"] == [["0", "0"], ["1", "1"]]


def test_realize_writes_history(capsys, tmp_path):
    out = tmp_path / "history.json"
    code, data, _ = run(capsys, "realize", "--alpha-const", "1/2", "--rate", "linear",
                        "--stages", "8", "--out", str(out))
    assert code == 0
    res = data["results"]
    assert res["unit_steps"] and res["mixing_invariant"] and res["branch_soundness"]
    history = json.loads(out.read_text())
    assert len(history) == 8 and {h["branch"] for h in history} <= {"plus", "minus"}


def test_canonical_output_is_byte_stable():
    argv = [sys.executable, "-m", "subshift_entropy", "entropy", "builtin:golden_mean",
            "--bits", "16"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and b"." not in first.replace(b"subshift-spec", b"")
