"""Command-line front end: ``qsr <command> [flags]``.

Exit codes: 0 PASS or FOUND, 1 FAIL or NONE, 2 usage or parse error,
3 SKIPPED or INCONCLUSIVE.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .extension import (
    disjoint_outer_measure,
    measurable_sets,
    outer_measure_table,
    splitting_witness,
    verify_alternative_definition,
    verify_extension_theorem,
)
from .geometry import (
    Arc,
    Rect,
    arc_intersect,
    arc_intersect_complement,
    rect_difference,
    rect_intersect,
    verify_arc_qsr,
    verify_rect_qsr,
)
from .instances import (
    STYLES,
    GenerationError,
    InstanceFileError,
    generate_random_instance,
    parse_instance,
    serialize_instance,
)
from .setcore import (
    DEFAULT_MAX_UNIVERSE,
    CapacityError,
    Instance,
    Report,
    StructureError,
    Universe,
    Verdict,
    format_measure,
    validate_premeasure,
)
from .structure import is_quasi_semi_ring
from .uniqueness import (
    TwoMeasureInstance,
    generate_ring,
    search_uniqueness_counterexample,
    verify_sigma_uniqueness,
    verify_smallest_ring,
    verify_uniqueness_on_ring,
)

EXIT_CODES = {
    Verdict.PASS: 0, Verdict.FOUND: 0,
    Verdict.FAIL: 1, Verdict.NONE: 1,
    Verdict.SKIPPED: 3, Verdict.INCONCLUSIVE: 3,
}
USAGE_ERROR = 2

# witness keys whose raw value is a subset mask
_SET_KEYS = {"target", "member", "set", "split_witness", "subset", "superset",
             "first", "second", "difference", "witness"}


@dataclass
class CommandReport:
    command: str
    verdict: Verdict
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    seed: Optional[int] = None
    version: str = __version__
    reason: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_records(self) -> str:
        """Line-delimited JSON: a header record, then one record per entry."""
        lines = [{"record": "report", "command": self.command, "verdict": self.verdict.value,
                  "seed": self.seed, "version": self.version, "reason": self.reason}]
        lines += [{"record": "witness", "name": k, "value": v} for k, v in self.witnesses.items()]
        lines += [{"record": "detail", "name": k, "value": v} for k, v in self.details.items()]
        lines += [{"record": "timing", "name": k, "seconds": v} for k, v in self.timings.items()]
        return "".join(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n" for rec in lines)

    @classmethod
    def from_records(cls, text: str) -> "CommandReport":
        report: Optional[CommandReport] = None
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            kind = rec["record"]
            if kind == "report":
                report = cls(rec["command"], Verdict(rec["verdict"]), seed=rec["seed"],
                             version=rec["version"], reason=rec["reason"])
            elif report is None:
                raise ValueError("records must start with a report header")
            elif kind == "witness":
                report.witnesses[rec["name"]] = rec["value"]
            elif kind == "detail":
                report.details[rec["name"]] = rec["value"]
            elif kind == "timing":
                report.timings[rec["name"]] = rec["seconds"]
        if report is None:
            raise ValueError("no report header found")
        return report

    def to_text(self) -> str:
        out = [f"{self.command}: {self.verdict.value}"]
        if self.reason:
            out.append(f"  reason: {self.reason}")
        for k, v in self.witnesses.items():
            out.append(f"  witness {k}: {_show(k, v)}")
        for k, v in self.details.items():
            out.append(f"  {k}: {_show(k, v)}")
        if self.seed is not None:
            out.append(f"  seed: {self.seed}")
        return "\n".join(out) + "\n"


def _show(key: str, v: Any) -> str:
    if key in _SET_KEYS or key in {"partition", "structure_witness",
                                   "members", "measurable", "checked"}:
        if isinstance(v, str):
            return "{" + v + "}" if v else "∅"
        if isinstance(v, list):
            return "[" + ", ".join(_show("set", x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k or '∅'}: {x}" for k, x in v.items()) + "}"
    return str(v)


def _render(key: str, value: Any, universe: Universe) -> Any:
    """Raw witness value to JSON: masks become subset keys, numbers become strings."""
    if key in _SET_KEYS and isinstance(value, int) and not isinstance(value, bool):
        return universe.key(value)
    if key == "partition":
        return [universe.key(m) for m in value]
    if key == "structure_witness":
        return None if value is None else [universe.key(m) for m in value]
    if isinstance(value, Fraction) or value == float("inf"):
        return format_measure(value)
    return value


def _from_report(command: str, rep: Report, universe: Universe, **extra) -> CommandReport:
    witnesses = {k: _render(k, v, universe) for k, v in rep.witness.items()}
    return CommandReport(command, rep.verdict, witnesses, reason=rep.reason, **extra)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(args, flag: str = "input") -> Instance:
    path = getattr(args, flag)
    if path is None:
        raise UsageError(f"--{flag} is required for {args.command}")
    return parse_instance(path, max_universe=args.max_universe)


def _pair(args) -> TwoMeasureInstance:
    first = _load(args)
    second = _load(args, "second")
    try:
        return TwoMeasureInstance(first, second)
    except StructureError as exc:
        raise UsageError(str(exc)) from None


# -- commands ----------------------------------------------------------------

def cmd_check_structure(args) -> CommandReport:
    inst = _load(args)
    rep = is_quasi_semi_ring(inst.set_class)
    u = inst.universe
    witnesses = {}
    if rep.witness is not None:
        a, b, t = rep.witness
        witnesses = {"first": u.key(a), "second": u.key(b), "target": u.key(t)}
    details = {"quasi_semi_ring": rep.quasi_semi_ring, "semi_ring": rep.semi_ring,
               "ring": rep.ring, "algebra": rep.algebra}
    verdict = Verdict.PASS if rep.quasi_semi_ring else Verdict.FAIL
    return CommandReport("check-structure", verdict, witnesses, details, reason=rep.message)


def cmd_validate_premeasure(args) -> CommandReport:
    inst = _load(args)
    return _from_report("validate-premeasure", validate_premeasure(inst), inst.universe)


def cmd_outer_measure(args) -> CommandReport:
    inst = _load(args)
    table = outer_measure_table(inst)
    u = inst.universe
    if args.set is not None:
        e = _set_arg(u, args.set)
        details = {"set": u.key(e), "value": format_measure(table[e]),
                   "disjoint_value": format_measure(disjoint_outer_measure(inst, e, table))}
    else:
        details = {"table": {u.key(e): format_measure(table[e]) for e in range(len(table))}}
    return CommandReport("outer-measure", Verdict.PASS, details=details)


def _set_arg(u: Universe, key: str) -> int:
    try:
        return u.from_key(key)
    except StructureError as exc:
        raise UsageError(str(exc)) from None


def cmd_measurable(args) -> CommandReport:
    inst = _load(args)
    table = outer_measure_table(inst)
    u = inst.universe
    if args.all:
        rep = measurable_sets(table)
        details = {"measurable": [u.key(m) for m in rep.measurable_sets],
                   "count": len(rep.measurable_sets), "algebra": rep.algebra}
        verdict = Verdict.PASS if rep.algebra else Verdict.FAIL
        return CommandReport("measurable", verdict, details=details)
    targets = [_set_arg(u, args.set)] if args.set is not None else list(inst.members)
    witnesses = {}
    for a in targets:
        w = splitting_witness(table, a)
        if w is not None:
            witnesses = {"set": u.key(a), "split_witness": u.key(w),
                         "outer": format_measure(table[w]),
                         "split_sum": format_measure(table[w & a] + table[w & ~a])}
            return CommandReport("measurable", Verdict.FAIL, witnesses,
                                 reason="splitting identity fails")
    return CommandReport("measurable", Verdict.PASS, details={"checked": [u.key(a) for a in targets]})


def cmd_verify_extension(args) -> CommandReport:
    inst = _load(args)
    return _from_report("verify-extension", verify_extension_theorem(inst), inst.universe)


def cmd_verify_prop1(args) -> CommandReport:
    inst = _load(args)
    return _from_report("verify-prop1", verify_alternative_definition(inst), inst.universe)


def cmd_generate_ring(args) -> CommandReport:
    inst = _load(args)
    rep = verify_smallest_ring(inst.set_class)
    out = _from_report("generate-ring", rep, inst.universe)
    if rep.verdict is not Verdict.SKIPPED:
        ring = generate_ring(inst.set_class, check=False)
        out.details["members"] = [inst.universe.key(m) for m in ring.members]
    return out


def cmd_verify_uniqueness(args) -> CommandReport:
    two = _pair(args)
    return _from_report("verify-uniqueness", verify_uniqueness_on_ring(two), two.first.universe)


def cmd_verify_sigma_uniqueness(args) -> CommandReport:
    two = _pair(args)
    return _from_report("verify-sigma-uniqueness", verify_sigma_uniqueness(two),
                        two.first.universe)


def cmd_search_counterexample(args) -> CommandReport:
    inst = _load(args)
    cx = search_uniqueness_counterexample(inst, args.seed, args.budget)
    if cx is None:
        return CommandReport("search-counterexample", Verdict.NONE, seed=args.seed,
                             details={"budget": args.budget})
    u = inst.universe
    weights = lambda w: {u.atoms[i]: format_measure(v) for i, v in enumerate(w)}
    witnesses = {
        "witness": u.key(cx.witness),
        "first_value": format_measure(cx.value(cx.first, cx.witness)),
        "second_value": format_measure(cx.value(cx.second, cx.witness)),
        "first_weights": weights(cx.first),
        "second_weights": weights(cx.second),
    }
    return CommandReport("search-counterexample", Verdict.FOUND, witnesses,
                         details={"trial": cx.trial, "budget": args.budget}, seed=args.seed)


def cmd_arcs_demo(args) -> CommandReport:
    a, b = Arc(0, Fraction(3, 2)), Arc(1, Fraction(5, 2))
    samples = args.budget if args.budget is not None else 200
    rep = verify_arc_qsr(samples=samples, seed=args.seed, probes=200)
    details = {"A": str(a), "B": str(b),
               "A ∩ B": str(arc_intersect(a, b)),
               "A ∖ B": str(arc_intersect_complement(a, b)),
               "random_pairs": rep.trials, "max_pieces": rep.max_pieces,
               "restricted_semi_ring": rep.notes["restricted_semi_ring"]}
    verdict = Verdict.PASS if rep.passed else Verdict.FAIL
    return CommandReport("arcs-demo", verdict, details=details, seed=args.seed)


def cmd_rects_demo(args) -> CommandReport:
    a, b = Rect(0, 2, 0, 3), Rect(0, 3, 0, 2)
    c, d = Rect(0, 3, 0, 1), Rect(1, 2, 0, 1)
    samples = args.budget if args.budget is not None else 200
    rep = verify_rect_qsr(samples=samples, seed=args.seed, probes=200)
    inter = rect_intersect(a, b)
    diff = rect_difference(c, d)
    details = {"A": str(a), "B": str(b), "A ∩ B": str(inter), "area(A ∩ B)": str(inter.area),
               "C": str(c), "D": str(d), "C ∖ D": str(diff), "area(C ∖ D)": str(diff.area),
               "random_pairs": rep.trials, "max_pieces": rep.max_pieces}
    verdict = Verdict.PASS if rep.passed else Verdict.FAIL
    return CommandReport("rects-demo", verdict, details=details, seed=args.seed)


def cmd_gen(args) -> CommandReport:
    try:
        inst = generate_random_instance(args.seed, args.n, args.style, args.max_universe)
    except GenerationError as exc:
        return CommandReport("gen", Verdict.INCONCLUSIVE, seed=args.seed, reason=str(exc))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return CommandReport("gen", Verdict.PASS, seed=args.seed,
                         details={"instance": serialize_instance(inst)})


COMMANDS = {
    "check-structure": cmd_check_structure,
    "validate-premeasure": cmd_validate_premeasure,
    "outer-measure": cmd_outer_measure,
    "measurable": cmd_measurable,
    "verify-extension": cmd_verify_extension,
    "verify-prop1": cmd_verify_prop1,
    "generate-ring": cmd_generate_ring,
    "verify-uniqueness": cmd_verify_uniqueness,
    "verify-sigma-uniqueness": cmd_verify_sigma_uniqueness,
    "search-counterexample": cmd_search_counterexample,
    "arcs-demo": cmd_arcs_demo,
    "rects-demo": cmd_rects_demo,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("-i", "--input")
        p.add_argument("--second")
        p.add_argument("--set")
        p.add_argument("--all", action="store_true")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=10_000 if name == "search-counterexample" else None)
        p.add_argument("--n", type=int, default=4)
        p.add_argument("--style", choices=STYLES, default="semiring")
        p.add_argument("--format", choices=("text", "records"), default="text")
        p.add_argument("--max-universe", type=int, default=DEFAULT_MAX_UNIVERSE)
    return parser


def run_command(argv: Sequence[str], stdout=None) -> tuple[Optional[CommandReport], int]:
    """Run one invocation; returns the report (None on usage errors) and exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:  # --help / --version
        return None, int(exc.code or 0)
    except UsageError as exc:
        fmt = "records" if "records" in argv else "text"
        _emit_error(stdout, argparse.Namespace(format=fmt, command=None),
                    [("USAGE", "argv", str(exc))])
        return None, USAGE_ERROR
    started = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
    except InstanceFileError as exc:
        _emit_error(stdout, args, [(d.code, d.where, d.message) for d in exc.diagnostics])
        return None, USAGE_ERROR
    except (UsageError, CapacityError, StructureError, OSError) as exc:
        code = {CapacityError: "CAPACITY", StructureError: "STRUCTURE"}.get(type(exc), "USAGE")
        _emit_error(stdout, args, [(code, args.command, str(exc))])
        return None, USAGE_ERROR
    report.timings["total"] = round(time.perf_counter() - started, 6)
    if args.command == "gen" and report.verdict is Verdict.PASS and args.format == "text":
        stdout.write(report.details["instance"])
    elif args.format == "records":
        stdout.write(report.to_records())
    else:
        stdout.write(report.to_text())
    return report, report.exit_code


def _emit_error(stdout, args, diagnostics) -> None:
    if args.format == "records":
        for code, where, message in diagnostics:
            stdout.write(json.dumps({"record": "error", "code": code, "where": where,
                                     "message": message}, ensure_ascii=False) + "\n")
    else:
        for code, where, message in diagnostics:
            stdout.write(f"error {code} at {where}: {message}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    _, code = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
