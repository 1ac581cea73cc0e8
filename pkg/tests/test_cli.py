import io
import json
import random
from pathlib import Path

import pytest

from quasimeasure.cli import EXIT_CODES, CommandReport, main, run_command
from quasimeasure.extension import outer_measure_table
from quasimeasure.instances import (
    InstanceFileError,
    generate_random_instance,
    parse_instance,
    parse_instance_text,
    serialize_instance,
    write_instance,
)
from quasimeasure.setcore import Verdict, validate_premeasure
from quasimeasure.structure import is_quasi_semi_ring

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(*argv):
    buf = io.StringIO()
    report, code = run_command([str(a) for a in argv], stdout=buf)
    return report, code, buf.getvalue()


def doc(**overrides):
    base = {"universe": ["a", "b"], "class": [[], ["a"], ["a", "b"]],
            "measure": {"": "0", "a": "1", "a,b": "3/2"}}
    base.update(overrides)
    return json.dumps(base)


def codes_of(text):
    with pytest.raises(InstanceFileError) as info:
        parse_instance_text(text)
    return info.value.codes


def test_parse_interval_fixture():
    inst = parse_instance(FIXTURES / "interval3.qsr")
    assert len(inst.members) == 3 * 4 // 2 + 1 == 7
    assert inst.mu(inst.universe.full) == 3


def test_parse_ok():
    inst = parse_instance_text(doc())
    assert inst.mu(0b11) == pytest.approx(1.5) and str(inst.mu(0b11)) == "3/2"


@pytest.mark.parametrize("overrides, code", [
    ({"measure": {"": "0", "a": "1/0", "a,b": "1"}}, "MALFORMED_FRACTION"),
    ({"measure": {"": "0", "a": "0.5", "a,b": "1"}}, "MALFORMED_FRACTION"),
    ({"class": [[], ["a", "b"], ["b", "a"]], "measure": {"": "0", "a,b": "1"}}, "DUPLICATE_SUBSET"),
    ({"class": [[], ["z"]], "measure": {"": "0"}}, "UNKNOWN_LABEL"),
    ({"class": [[], "a"], "measure": {"": "0"}}, "MALFORMED_SUBSET"),
    ({"measure": {"": "0", "a": "1"}}, "MISSING_MEASURE_KEY"),
    ({"measure": {"": "0", "a": "1", "a,b": "2", "b": "1"}}, "EXTRA_MEASURE_KEY"),
    ({"measure": {"": "1", "a": "1", "a,b": "2"}}, "NONZERO_EMPTY_MEASURE"),
    ({"class": [["a"]], "measure": {"a": "1"}}, "MISSING_EMPTY_SET"),
    ({"universe": []}, "BAD_UNIVERSE"),
    ({"universe": ["a", "a"]}, "BAD_UNIVERSE"),
])
def test_parse_diagnostics(overrides, code):
    assert code in codes_of(doc(**overrides))


def test_parse_missing_field_and_garbage():
    assert codes_of('{"universe": ["a"]}') == ["MISSING_FIELD", "MISSING_FIELD"]
    assert codes_of("{not json") == ["MALFORMED_FILE"]
    big = json.dumps({"universe": [str(i) for i in range(25)], "class": [[]], "measure": {"": "0"}})
    assert codes_of(big) == ["UNIVERSE_TOO_LARGE"]


def test_every_issue_reported():
    text = doc(measure={"": "0", "a": "x", "b": "1"})
    assert sorted(codes_of(text)) == ["EXTRA_MEASURE_KEY", "MALFORMED_FRACTION", "MISSING_MEASURE_KEY"]


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.qsr")), ids=lambda p: p.name)
def test_fixture_round_trip(path, tmp_path):
    inst = parse_instance(path)
    text = serialize_instance(inst)
    again = parse_instance_text(text)
    assert (again.universe, again.members, again.measure) == (inst.universe, inst.members, inst.measure)
    assert serialize_instance(again) == text
    write_instance(again, tmp_path / "x.qsr")
    assert (tmp_path / "x.qsr").read_text() == text


@pytest.mark.parametrize("style", ["semiring", "venn", "rejection"])
def test_generated_instances(style):
    for seed in range(20):
        inst = generate_random_instance(seed, 1 + seed % 8, style)
        assert is_quasi_semi_ring(inst.set_class).quasi_semi_ring
        assert validate_premeasure(inst).passed
        assert len(inst.members) <= 20
    a = serialize_instance(generate_random_instance(1, 4, style))
    assert a == serialize_instance(generate_random_instance(1, 4, style))


def test_gen_command_is_byte_identical(tmp_path):
    _, code, first = run("gen", "--seed", 5, "--n", 5, "--style", "venn")
    _, _, second = run("gen", "--seed", 5, "--n", 5, "--style", "venn")
    assert code == 0 and first == second
    path = tmp_path / "g.qsr"
    path.write_text(first)
    rep, code, _ = run("check-structure", "-i", path)
    assert rep.verdict is Verdict.PASS and code == 0


def test_gen_rejects_bad_arguments():
    assert run("gen", "--n", 0)[1] == 2
    assert run("gen", "--style", "nope")[1] == 2


def test_verify_extension_example1():
    rep, code, out = run("verify-extension", "-i", FIXTURES / "example1.qsr")
    assert rep.verdict is Verdict.PASS and code == 0
    assert out.startswith("verify-extension: PASS")


def test_arcs_demo_prints_witness_decomposition():
    rep, code, out = run("arcs-demo", "--budget", 20)
    assert code == 0
    assert rep.details["A ∩ B"] == "(0, π/2] ∪ (π, 3π/2]"
    assert "(0, π/2] ∪ (π, 3π/2]" in out


def test_rects_demo():
    rep, code, _ = run("rects-demo", "--budget", 20)
    assert code == 0 and rep.details["area(A ∩ B)"] == "4"


def test_outer_measure_of_empty_set():
    rep, code, _ = run("outer-measure", "-i", FIXTURES / "interval3.qsr", "--set", "")
    assert code == 0 and rep.details["value"] == "0"
    rep, _, _ = run("outer-measure", "-i", FIXTURES / "interval3.qsr", "--set", "1,3")
    assert rep.details["value"] == "2" == rep.details["disjoint_value"]
    rep, _, _ = run("outer-measure", "-i", FIXTURES / "interval3.qsr")
    assert len(rep.details["table"]) == 8


def test_measurable_witness_round_trip():
    path = FIXTURES / "nonmeasurable.qsr"
    rep, code, _ = run("measurable", "-i", path, "--set", "1")
    assert code == 1
    assert rep.witnesses == {"set": "1", "split_witness": "1,2", "outer": "1", "split_sum": "2"}
    # the witness re-validates against the table
    inst = parse_instance(path)
    table = outer_measure_table(inst)
    e = inst.universe.from_key(rep.witnesses["split_witness"])
    a = inst.universe.from_key(rep.witnesses["set"])
    assert table[e] != table[e & a] + table[e & ~a]
    rep, code, _ = run("measurable", "-i", path, "--all")
    assert rep.details["measurable"] == ["", "1,2"] and code == 0


def test_counterexample_command():
    rep, code, _ = run("search-counterexample", "-i", FIXTURES / "counterexample.qsr")
    assert rep.verdict is Verdict.FOUND and code == 0
    assert rep.witnesses["witness"] == "2"
    assert rep.witnesses["first_value"] != rep.witnesses["second_value"]
    rep, code, _ = run("search-counterexample", "-i", FIXTURES / "interval3.qsr")
    assert rep.verdict is Verdict.NONE and code == 1


def test_two_measure_commands():
    first, second = FIXTURES / "example1.qsr", FIXTURES / "example1_second.qsr"
    rep, code, _ = run("verify-uniqueness", "-i", first, "--second", second)
    assert rep.verdict is Verdict.PASS and code == 0
    rep, code, _ = run("verify-sigma-uniqueness", "-i", first, "--second", second)
    assert rep.verdict is Verdict.SKIPPED and code == 3
    i3 = FIXTURES / "interval3.qsr"
    rep, code, _ = run("verify-sigma-uniqueness", "-i", i3, "--second", i3)
    assert rep.verdict is Verdict.PASS and code == 0
    assert run("verify-uniqueness", "-i", first)[1] == 2


def test_check_structure_failure_witness(tmp_path):
    path = tmp_path / "bad.qsr"
    path.write_text(json.dumps({"universe": ["1", "2"], "class": [[], ["1"], ["1", "2"]],
                                "measure": {"": "0", "1": "1", "1,2": "2"}}))
    rep, code, out = run("check-structure", "-i", path)
    assert code == 1
    assert rep.witnesses == {"first": "1,2", "second": "1", "target": "2"}
    assert "witness target: {2}" in out


def test_usage_and_parse_errors(tmp_path):
    assert run("verify-extension")[1] == 2
    rep, code, out = run("no-such-command")
    assert rep is None and code == 2 and out.startswith("error USAGE")
    bad = tmp_path / "bad.qsr"
    bad.write_text(doc(measure={"": "0", "a": "1/0", "a,b": "1"}))
    rep, code, out = run("validate-premeasure", "-i", bad, "--format", "records")
    assert rep is None and code == 2
    assert json.loads(out.splitlines()[0])["code"] == "MALFORMED_FRACTION"
    assert run("outer-measure", "-i", FIXTURES / "interval3.qsr", "--set", "9")[1] == 2
    assert run("validate-premeasure", "-i", tmp_path / "missing.qsr")[1] == 2


def test_main_returns_exit_code(capsys):
    assert main(["verify-prop1", "-i", str(FIXTURES / "example1.qsr")]) == 0
    assert "verify-prop1: PASS" in capsys.readouterr().out


def strip_timings(records):
    return [line for line in records.splitlines() if '"timing"' not in line]


def test_records_stable_and_lossless():
    argv = ("search-counterexample", "-i", FIXTURES / "example1.qsr", "--seed", 7,
            "--budget", 100, "--format", "records")
    rep, _, first = run(*argv)
    _, _, second = run(*argv)
    assert strip_timings(first) == strip_timings(second)
    back = CommandReport.from_records(first)
    assert back == rep
    assert back.to_records() == first


def _random_argv(rng, tmp_path, k, extra):
    fixtures = sorted(FIXTURES.glob("*.qsr")) + extra
    command = rng.choice(["check-structure", "validate-premeasure", "measurable",
                          "verify-extension", "verify-prop1", "generate-ring",
                          "search-counterexample", "verify-uniqueness",
                          "verify-sigma-uniqueness", "gen", "bogus"])
    if rng.random() < 0.5:
        inst = generate_random_instance(rng.randrange(1000), rng.randint(1, 6),
                                        rng.choice(["semiring", "venn", "rejection"]))
        path = tmp_path / f"r{k}.qsr"
        write_instance(inst, path)
    else:
        path = rng.choice(fixtures)
    argv = [command, "-i", path, "--seed", rng.randrange(100), "--budget", 50]
    if command.startswith("verify-") and "uniqueness" in command:
        argv += ["--second", path if rng.random() < 0.7 else rng.choice(fixtures)]
    if command == "gen":
        argv = ["gen", "--seed", rng.randrange(100), "--n", rng.randint(0, 9)]
    if rng.random() < 0.3:
        argv += ["--format", "records"]
    return argv


def test_exit_codes_match_verdicts(tmp_path):
    rng = random.Random(2718)
    not_qsr = tmp_path / "not_qsr.qsr"
    not_qsr.write_text(json.dumps({"universe": ["1", "2"], "class": [[], ["1"], ["1", "2"]],
                                   "measure": {"": "0", "1": "1", "1,2": "2"}}))
    not_additive = tmp_path / "not_additive.qsr"
    not_additive.write_text(json.dumps({"universe": ["1", "2"], "class": [[], ["1"], ["2"], ["1", "2"]],
                                        "measure": {"": "0", "1": "1", "2": "1", "1,2": "5"}}))
    seen = set()
    for k in range(100):
        rep, code, out = run(*_random_argv(rng, tmp_path, k, [not_qsr, not_additive]))
        if rep is None:
            assert code == 2
        else:
            assert code == EXIT_CODES[rep.verdict]
            seen.add(rep.verdict)
    assert {Verdict.PASS, Verdict.FAIL} <= seen
