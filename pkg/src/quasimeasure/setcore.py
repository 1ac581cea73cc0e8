"""Finite universes, bitmask subsets, exact extended-rational measure values.

Subsets are plain Python ints used as bitmasks: bit ``i`` set means atom ``i``
of the universe is a member.  Measure values are :class:`fractions.Fraction`
for finite values and the float ``INF`` for +infinity.  Mixing the two is safe
for the only operations we need (``+``, ``min``, comparisons) because
``Fraction + inf == inf`` and every Fraction compares below ``inf``.

On a finite universe any countable disjoint family has only finitely many
nonempty members, so countable additivity reduces to finite additivity; the
premeasure validator checks every finite partition.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Any, Iterable, Iterator, Optional, Sequence, Union

Subset = int
MeasureValue = Union[Fraction, float]

INF: float = math.inf
DEFAULT_MAX_UNIVERSE = 20
DEFAULT_TABLE_CAP = 16
DEFAULT_PARTITION_NODE_CAP = 10**6


class StructureError(ValueError):
    """Malformed input: mismatched universes, bad labels, non-member covers."""


class CapacityError(ValueError):
    """A universe exceeds the configured size cap for an operation."""


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"
    INCONCLUSIVE = "INCONCLUSIVE"
    FOUND = "FOUND"
    NONE = "NONE"


@dataclass(frozen=True)
class Report:
    """Outcome of a verification routine.

    ``witness`` holds raw values (masks, Fractions, member indices); the CLI
    turns them into labelled, JSON-friendly form.
    """

    check: str
    verdict: Verdict
    witness: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def __bool__(self) -> bool:
        return self.passed


# -- subsets -----------------------------------------------------------------

def popcount(mask: Subset) -> int:
    return mask.bit_count()


def atoms_of(mask: Subset) -> Iterator[int]:
    """Yield atom indices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_atom(mask: Subset) -> Subset:
    """Single-bit mask of the lowest atom in a nonempty ``mask``."""
    return mask & -mask


def subset_of(indices: Iterable[int]) -> Subset:
    mask = 0
    for i in indices:
        if i < 0:
            raise StructureError(f"negative atom index {i}")
        mask |= 1 << i
    return mask


def submasks(mask: Subset) -> Iterator[Subset]:
    """All submasks of ``mask``, including ``mask`` itself and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def is_partition(family: Sequence[Subset], target: Subset, n: Optional[int] = None) -> bool:
    """True iff ``family`` is pairwise disjoint with union exactly ``target``.

    When ``n`` is given every mask must fit in an ``n``-atom universe,
    otherwise :class:`StructureError` is raised.
    """
    if n is not None:
        bound = 1 << n
        for s in (*family, target):
            if s < 0 or s >= bound:
                raise StructureError(f"subset {s:#x} outside a {n}-atom universe")
    seen = 0
    for s in family:
        if seen & s:
            return False
        seen |= s
    return seen == target


@dataclass(frozen=True)
class Universe:
    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise StructureError("universe must be nonempty")
        if len(set(atoms)) != len(atoms):
            raise StructureError("universe labels must be distinct")
        for a in atoms:
            if not isinstance(a, str) or not a:
                raise StructureError(f"invalid atom label {a!r}")
            if "," in a:
                raise StructureError(f"atom label {a!r} contains ','")
        self._index  # build eagerly so bad input fails here

    @classmethod
    def of_size(cls, n: int) -> "Universe":
        """Universe with atoms labelled ``"1"`` .. ``str(n)``."""
        return cls(tuple(str(i) for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def full(self) -> Subset:
        return (1 << self.n) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.atoms)}

    def check_size(self, cap: int = DEFAULT_MAX_UNIVERSE) -> None:
        if self.n > cap:
            raise CapacityError(f"universe has {self.n} atoms; cap is {cap}")

    def subset(self, *labels: str) -> Subset:
        index = self._index
        mask = 0
        for lab in labels:
            if lab not in index:
                raise StructureError(f"unknown label {lab!r}")
            mask |= 1 << index[lab]
        return mask

    def labels(self, mask: Subset) -> list[str]:
        if mask >> self.n:
            raise StructureError(f"subset {mask:#x} outside universe of {self.n} atoms")
        return [self.atoms[i] for i in atoms_of(mask)]

    def key(self, mask: Subset) -> str:
        """Canonical text key: labels sorted lexicographically, comma-joined."""
        return ",".join(sorted(self.labels(mask)))

    def from_key(self, key: str) -> Subset:
        if key == "":
            return 0
        return self.subset(*key.split(","))

    def complement(self, mask: Subset) -> Subset:
        return self.full & ~mask


# -- measure values ----------------------------------------------------------

def measure_value(x: Any) -> MeasureValue:
    """Coerce ``x`` to a canonical MeasureValue (Fraction or INF)."""
    if isinstance(x, float):
        if x == INF:
            return INF
        raise ValueError(f"finite floats are not exact measure values: {x!r}")
    if isinstance(x, str):
        return parse_measure(x)
    value = Fraction(x)
    if value < 0:
        raise ValueError(f"measure values must be nonnegative, got {value}")
    return value


def is_finite(value: MeasureValue) -> bool:
    return value != INF


def measure_sum(values: Iterable[MeasureValue]) -> MeasureValue:
    total: MeasureValue = Fraction(0)
    for v in values:
        if v == INF:
            return INF
        total += v
    return total


def format_measure(value: MeasureValue) -> str:
    if value == INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_measure(text: str) -> MeasureValue:
    """Parse ``"inf"``, an integer string or ``"p/q"`` into a MeasureValue."""
    s = text.strip()
    if s == "inf":
        return INF
    num, sep, den = s.partition("/")
    if not _is_int_literal(num) or (sep and not _is_int_literal(den)):
        raise ValueError(f"malformed fraction {text!r}")
    d = int(den) if sep else 1
    if d == 0:
        raise ValueError(f"malformed fraction {text!r}: zero denominator")
    value = Fraction(int(num), d)
    if value < 0:
        raise ValueError(f"measure values must be nonnegative, got {text!r}")
    return value


def _is_int_literal(s: str) -> bool:
    body = s[1:] if s[:1] in "+-" else s
    return body.isdigit() and body.isascii()


# -- classes and instances ---------------------------------------------------

@dataclass(frozen=True)
class SetClass:
    """A finite list of distinct subsets of a universe, in a fixed order."""

    universe: Universe
    members: tuple[Subset, ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if len(set(members)) != len(members):
            raise StructureError("class members must be distinct")
        full = self.universe.full
        for m in members:
            if m < 0 or m & ~full:
                raise StructureError(f"member {m:#x} outside the universe")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in self._member_set

    @cached_property
    def _member_set(self) -> frozenset[Subset]:
        return frozenset(self.members)

    def index(self, mask: Subset) -> int:
        return self.members.index(mask)

    @property
    def has_empty(self) -> bool:
        return 0 in self.members

    @property
    def union(self) -> Subset:
        u = 0
        for m in self.members:
            u |= m
        return u


@dataclass(frozen=True)
class Instance:
    """The triple (universe, class, premeasure); ``measure[i]`` is the value of ``members[i]``."""

    universe: Universe
    members: tuple[Subset, ...]
    measure: tuple[MeasureValue, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "measure", tuple(measure_value(v) for v in self.measure))
        SetClass(self.universe, self.members)  # validates members
        if len(self.measure) != len(self.members):
            raise StructureError("every class member needs exactly one measure value")
        if 0 not in self.members:
            raise StructureError("the class must contain the empty set")

    @classmethod
    def from_mapping(cls, universe: Universe, mapping: dict[Subset, Any]) -> "Instance":
        members = tuple(mapping)
        return cls(universe, members, tuple(mapping[m] for m in members))

    @classmethod
    def from_atom_weights(cls, set_class: SetClass, weights: Sequence[Any]) -> "Instance":
        """Additive premeasure: each member gets the sum of its atoms' weights."""
        w = [measure_value(x) for x in weights]
        if len(w) != set_class.universe.n:
            raise StructureError("need one weight per atom")
        values = tuple(measure_sum(w[i] for i in atoms_of(m)) for m in set_class.members)
        return cls(set_class.universe, set_class.members, values)

    @property
    def set_class(self) -> SetClass:
        return SetClass(self.universe, self.members)

    @property
    def n(self) -> int:
        return self.universe.n

    def mu(self, mask: Subset) -> MeasureValue:
        return self.measure[self.members.index(mask)]

    def as_dict(self) -> dict[Subset, MeasureValue]:
        return dict(zip(self.members, self.measure))


# -- premeasure validation ---------------------------------------------------

def iter_partitions(
    target: Subset, members: Sequence[Subset], node_cap: Optional[int] = None
) -> Iterator[list[int]]:
    """Yield every partition of ``target`` into nonempty ``members`` (as index lists).

    Branches on the lowest uncovered atom, so each partition is produced once.
    Raises :class:`_NodeCapExceeded` once more than ``node_cap`` DFS nodes are
    visited.
    """
    candidates = [(i, m) for i, m in enumerate(members) if m and m & ~target == 0]
    budget = [node_cap if node_cap is not None else -1]

    def dfs(remaining: Subset, chosen: list[int]) -> Iterator[list[int]]:
        if budget[0] == 0:
            raise _NodeCapExceeded
        budget[0] -= 1
        if remaining == 0:
            yield list(chosen)
            return
        low = lowest_atom(remaining)
        for i, m in candidates:
            if m & low and m & ~remaining == 0:
                chosen.append(i)
                yield from dfs(remaining ^ m, chosen)
                chosen.pop()

    return dfs(target, [])


class _NodeCapExceeded(Exception):
    pass


def validate_premeasure(
    instance: Instance, node_cap: int = DEFAULT_PARTITION_NODE_CAP
) -> Report:
    """Check mu(empty) = 0 and exact additivity over every partition into members.

    FAIL witnesses are ``target`` (mask), ``partition`` (member masks),
    ``expected`` (sum over the pieces) and ``actual`` (value of the target).
    """
    values = instance.as_dict()
    if values[0] != 0:
        return Report("validate-premeasure", Verdict.FAIL,
                      {"target": 0, "partition": [], "expected": Fraction(0),
                       "actual": values[0]}, "mu(empty) must be 0")
    members = instance.members
    for target, actual in zip(members, instance.measure):
        if target == 0:
            continue
        try:
            for part in iter_partitions(target, members, node_cap):
                if len(part) == 1:
                    continue
                expected = measure_sum(instance.measure[i] for i in part)
                if expected != actual:
                    return Report(
                        "validate-premeasure", Verdict.FAIL,
                        {"target": target, "partition": [members[i] for i in part],
                         "expected": expected, "actual": actual},
                        "additivity violated",
                    )
        except _NodeCapExceeded:
            return Report("validate-premeasure", Verdict.INCONCLUSIVE,
                          {"target": target, "node_cap": node_cap},
                          f"partition enumeration exceeded {node_cap} nodes")
    return Report("validate-premeasure", Verdict.PASS)
