"""Instance files (``.qsr``) and seeded random instances.

An instance file is a JSON object::

    {
      "universe": ["1", "2", "3"],
      "class": [[], ["1"], ["1", "2"]],
      "measure": {"": "0", "1": "1/2", "1,2": "inf"}
    }

Measure keys are canonical subset keys: labels sorted lexicographically and
joined by ``","``; the empty set is ``""``.  Values are strings so that
fractions survive the round trip exactly.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .setcore import (
    DEFAULT_MAX_UNIVERSE,
    Instance,
    SetClass,
    StructureError,
    Universe,
    format_measure,
    parse_measure,
)
from .structure import is_quasi_semi_ring

STYLES = ("semiring", "venn", "rejection")
MAX_GENERATED_CLASS = 20


@dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} at {self.where}: {self.message}"


class InstanceFileError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]


class GenerationError(RuntimeError):
    """Rejection sampling ran out of attempts."""


def parse_instance_text(text: str, source: str = "<string>",
                        max_universe: int = DEFAULT_MAX_UNIVERSE) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError([Diagnostic(
            "MALFORMED_FILE", f"{source}:{exc.lineno}:{exc.colno}", exc.msg)]) from None
    return parse_instance_data(doc, max_universe=max_universe)


def parse_instance(path: Union[str, Path], max_universe: int = DEFAULT_MAX_UNIVERSE) -> Instance:
    path = Path(path)
    return parse_instance_text(path.read_text(encoding="utf-8"), str(path), max_universe)


def parse_instance_data(doc: Any, max_universe: int = DEFAULT_MAX_UNIVERSE) -> Instance:
    """Validate a decoded document, collecting every problem before raising."""
    issues: list[Diagnostic] = []

    def issue(code: str, where: str, message: str) -> None:
        issues.append(Diagnostic(code, where, message))

    if not isinstance(doc, dict):
        raise InstanceFileError([Diagnostic("MALFORMED_FILE", "$", "expected a JSON object")])
    for key in ("universe", "class", "measure"):
        if key not in doc:
            issue("MISSING_FIELD", key, f"field {key!r} is required")
    if issues:
        raise InstanceFileError(issues)

    labels = doc["universe"]
    if not isinstance(labels, list) or not labels:
        raise InstanceFileError([Diagnostic("BAD_UNIVERSE", "universe",
                                            "expected a nonempty list of labels")])
    try:
        universe = Universe(tuple(labels))
    except StructureError as exc:
        raise InstanceFileError([Diagnostic("BAD_UNIVERSE", "universe", str(exc))]) from None
    if universe.n > max_universe:
        raise InstanceFileError([Diagnostic("UNIVERSE_TOO_LARGE", "universe",
                                            f"{universe.n} atoms exceeds cap {max_universe}")])

    members: list[int] = []
    if not isinstance(doc["class"], list):
        raise InstanceFileError([Diagnostic("MALFORMED_FILE", "class", "expected a list")])
    for i, entry in enumerate(doc["class"]):
        where = f"class[{i}]"
        if not isinstance(entry, list) or not all(isinstance(x, str) for x in entry):
            issue("MALFORMED_SUBSET", where, "expected a list of labels")
            continue
        unknown = [x for x in entry if x not in universe.atoms]
        if unknown:
            issue("UNKNOWN_LABEL", where, f"unknown labels {unknown}")
            continue
        mask = universe.subset(*entry)
        if mask in members:
            issue("DUPLICATE_SUBSET", where, f"subset {universe.key(mask)!r} listed twice")
            continue
        members.append(mask)
    if 0 not in members and not any(d.where.startswith("class") for d in issues):
        issue("MISSING_EMPTY_SET", "class", "the class must contain the empty set")

    measure_doc = doc["measure"]
    values: dict[int, Any] = {}
    if not isinstance(measure_doc, dict):
        issue("MALFORMED_FILE", "measure", "expected an object")
        measure_doc = {}
    member_keys = {universe.key(m): m for m in members}
    for key, raw in measure_doc.items():
        where = f"measure[{key!r}]"
        if key not in member_keys:
            issue("EXTRA_MEASURE_KEY", where, "key is not a class member")
            continue
        try:
            values[member_keys[key]] = parse_measure(str(raw))
        except ValueError as exc:
            issue("MALFORMED_FRACTION", where, str(exc))
    for key, m in member_keys.items():
        if key not in measure_doc:
            issue("MISSING_MEASURE_KEY", f"measure[{key!r}]", "class member has no value")
    if values.get(0, 0) != 0:
        issue("NONZERO_EMPTY_MEASURE", "measure['']", "the empty set must have measure 0")
    if issues:
        raise InstanceFileError(issues)
    return Instance(universe, tuple(members), tuple(values[m] for m in members))


def instance_to_data(instance: Instance) -> dict:
    u = instance.universe
    return {
        "universe": list(u.atoms),
        "class": [sorted(u.labels(m)) for m in instance.members],
        "measure": {u.key(m): format_measure(v)
                    for m, v in sorted(zip(instance.members, instance.measure),
                                       key=lambda mv: u.key(mv[0]))},
    }


def serialize_instance(instance: Instance) -> str:
    """Canonical text: one class member and one measure entry per line."""
    data = instance_to_data(instance)
    dump = lambda x: json.dumps(x, ensure_ascii=False)
    lines = ["{", f'  "universe": {dump(data["universe"])},', '  "class": [']
    lines += [f"    {dump(m)}," for m in data["class"]]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  ],", '  "measure": {']
    lines += [f"    {dump(k)}: {dump(v)}," for k, v in data["measure"].items()]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  }", "}"]
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_instance(instance), encoding="utf-8")


# -- random instances --------------------------------------------------------

def _random_weights(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(1, 9), rng.randint(1, 6)) for _ in range(n)]


def _blocks(rng: random.Random, atoms: list[int], count: int) -> list[int]:
    """Split ``atoms`` into ``count`` nonempty consecutive blocks, as masks."""
    cuts = sorted(rng.sample(range(1, len(atoms)), count - 1))
    bounds = [0, *cuts, len(atoms)]
    return [sum(1 << a for a in atoms[lo:hi]) for lo, hi in zip(bounds, bounds[1:])]


def _interval_class(rng: random.Random, n: int) -> list[int]:
    atoms = list(range(n))
    rng.shuffle(atoms)
    used = atoms[: rng.randint(max(1, n - 2), n)]
    blocks = _blocks(rng, used, rng.randint(min(2, len(used)), min(5, len(used))))
    members = [0]
    for i in range(len(blocks)):
        acc = 0
        for j in range(i, len(blocks)):
            acc |= blocks[j]
            members.append(acc)
    return members


def _laminar_class(rng: random.Random, n: int) -> list[int]:
    """Hierarchical partition: every listed node is split into listed children."""
    atoms = list(range(n))
    rng.shuffle(atoms)
    root = sum(1 << a for a in atoms)
    members = [0, root]
    frontier = [atoms]
    while frontier and len(members) < MAX_GENERATED_CLASS - 4:
        node = frontier.pop(rng.randrange(len(frontier)))
        if len(node) < 2 or (node is not atoms and rng.random() < 0.25):
            continue
        parts = rng.randint(2, min(3, len(node)))
        cuts = sorted(rng.sample(range(1, len(node)), parts - 1))
        bounds = [0, *cuts, len(node)]
        for lo, hi in zip(bounds, bounds[1:]):
            child = node[lo:hi]
            members.append(sum(1 << a for a in child))
            frontier.append(child)
    return members


def _venn_class(rng: random.Random, n: int) -> list[int]:
    atoms = list(range(n))
    rng.shuffle(atoms)
    cells = _blocks(rng, atoms, rng.randint(2, min(6, n)) if n > 1 else 1)
    listed = rng.sample(cells, rng.randint(max(min(2, len(cells)), len(cells) - 2), len(cells)))
    members = [0, *listed]
    for _ in range(rng.randint(1, 5)):
        k = rng.randint(2, len(listed)) if len(listed) > 1 else 1
        union = 0
        for c in rng.sample(listed, k):
            union |= c
        if union not in members:
            members.append(union)
    return members


def _rejection_class(rng: random.Random, n: int, attempts: int) -> list[int]:
    """Random unions of random cells, kept once they form a quasi-semi-ring.

    Trivial classes are rejected too: at least three nonempty members
    whenever the universe has two or more atoms.
    """
    universe = Universe.of_size(n)
    min_size = 4 if n > 1 else 2
    for _ in range(attempts):
        atoms = list(range(n))
        rng.shuffle(atoms)
        cells = _blocks(rng, atoms, rng.randint(min(2, n), min(5, n)))
        members = {0}
        for _ in range(rng.randint(3, 8)):
            union = 0
            while not union:
                for c in cells:
                    if rng.random() < 0.5:
                        union |= c
            members.add(union)
        ordered = sorted(members)
        if len(ordered) < min_size:
            continue
        if is_quasi_semi_ring(SetClass(universe, tuple(ordered))).quasi_semi_ring:
            return ordered
    raise GenerationError(f"no quasi-semi-ring found in {attempts} attempts")


def generate_random_instance(seed: int, n: int, style: str = "semiring",
                             max_universe: int = DEFAULT_MAX_UNIVERSE,
                             attempts: int = 10_000) -> Instance:
    """Reproducible random quasi-semi-ring with an additive atom-weight premeasure."""
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}; choose from {STYLES}")
    if not 1 <= n <= max_universe:
        raise ValueError(f"n must be in 1..{max_universe}")
    rng = random.Random(f"{style}:{seed}:{n}")
    if style == "semiring":
        members = _interval_class(rng, n) if n < 3 or rng.random() < 0.5 else _laminar_class(rng, n)
    elif style == "venn":
        members = _venn_class(rng, n)
    else:
        members = _rejection_class(rng, n, attempts)
    members = list(dict.fromkeys(members))
    assert len(members) <= MAX_GENERATED_CLASS
    universe = Universe.of_size(n)
    return Instance.from_atom_weights(SetClass(universe, tuple(members)),
                                      _random_weights(rng, n))
