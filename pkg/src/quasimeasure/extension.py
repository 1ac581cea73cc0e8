"""Outer measure, disjointification and the splitting criterion.

The outer measure of E is the cheapest way to cover E with class members.
On a finite class the infimum is a minimum, computed for every E at once by
the recurrence

    f[0] = 0
    f[E] = min over members A containing the lowest atom of E of mu(A) + f[E - A]

Some member of any cover must contain the lowest atom of E, so restricting
the branch to those members loses nothing.  Pieces may overshoot E.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .setcore import (
    DEFAULT_TABLE_CAP,
    INF,
    CapacityError,
    Instance,
    MeasureValue,
    Report,
    SetClass,
    StructureError,
    Subset,
    Verdict,
    is_partition,
    lowest_atom,
    measure_sum,
    submasks,
    validate_premeasure,
)
from .structure import Decomposer, is_quasi_semi_ring


@dataclass(frozen=True)
class OuterMeasureTable:
    instance: Instance
    values: tuple[MeasureValue, ...]

    @property
    def n(self) -> int:
        return self.instance.n

    def __getitem__(self, mask: Subset) -> MeasureValue:
        return self.values[mask]

    def __len__(self) -> int:
        return len(self.values)

    def with_override(self, mask: Subset, value: MeasureValue) -> "OuterMeasureTable":
        """Copy with one entry replaced; lets tests inject axiom violations."""
        values = list(self.values)
        values[mask] = value
        return OuterMeasureTable(self.instance, tuple(values))


def outer_measure_table(instance: Instance, cap: int = DEFAULT_TABLE_CAP) -> OuterMeasureTable:
    n = instance.n
    if n > cap:
        raise CapacityError(f"outer-measure table needs 2^{n} entries; table cap is {cap} atoms")
    pairs = [(m, v) for m, v in zip(instance.members, instance.measure) if m]
    by_atom: list[list[tuple[Subset, MeasureValue]]] = [
        [(m, v) for m, v in pairs if m >> i & 1] for i in range(n)
    ]
    size = 1 << n
    f: list[MeasureValue] = [INF] * size
    f[0] = Fraction(0)
    for e in range(1, size):
        low = lowest_atom(e)
        best: MeasureValue = INF
        for m, v in by_atom[low.bit_length() - 1]:
            cand = v + f[e & ~m]
            if cand < best:
                best = cand
        f[e] = best
    return OuterMeasureTable(instance, tuple(f))


def disjoint_outer_measure(
    instance: Instance, target: Subset, table: Optional[OuterMeasureTable] = None
) -> MeasureValue:
    """Cheapest cover of ``target`` by pairwise-disjoint members.

    Branch and bound: a partial cover costing ``s`` with uncovered part ``R``
    cannot finish below ``s + table[R]`` because restricting covers to
    disjoint families can only raise the infimum.
    """
    if target == 0:
        return Fraction(0)
    if table is None:
        table = outer_measure_table(instance)
    pairs = [(m, v) for m, v in zip(instance.members, instance.measure) if m]
    floor = table[target]
    best: list[MeasureValue] = [INF]

    def dfs(remaining: Subset, used: Subset, cost: MeasureValue) -> bool:
        if remaining == 0:
            if cost < best[0]:
                best[0] = cost
            return best[0] == floor
        if best[0] != INF and cost + table[remaining] >= best[0]:
            return False
        low = lowest_atom(remaining)
        for m, v in pairs:
            if m & low and not m & used:
                if dfs(remaining & ~m, used | m, cost + v):
                    return True
        return False

    dfs(target, 0, Fraction(0))
    return best[0]


def disjointify(
    cover: Sequence[Subset], set_class: SetClass, measure: Optional[dict] = None
) -> list[Subset]:
    """Replace a cover by disjoint members with the same union.

    B_1 = A_1, and B_n = A_n - A_{n-1} - ... - A_1 is built one subtraction
    at a time: every intermediate piece is a member, and member minus member
    decomposes in a quasi-semi-ring.  With ``measure`` given, asserts the
    total over the pieces does not exceed the total over the cover.
    """
    decompose = Decomposer(set_class.members)
    for a in cover:
        if a not in set_class:
            raise StructureError(f"cover element {a:#x} is not a class member")
    pieces: list[Subset] = []
    for n, a in enumerate(cover):
        current = [a] if a else []
        for earlier in reversed(cover[:n]):
            refined = []
            for piece in current:
                found = decompose(piece & ~earlier)
                if found is None:
                    raise StructureError(
                        f"{piece:#x} minus {earlier:#x} has no disjoint decomposition;"
                        " the class is not a quasi-semi-ring")
                refined.extend(set_class.members[i] for i in found)
            current = refined
        pieces.extend(current)

    union = 0
    for a in cover:
        union |= a
    assert is_partition(pieces, union)
    if measure is not None:
        assert measure_sum(measure[p] for p in pieces) <= measure_sum(measure[a] for a in cover)
    return pieces


def verify_alternative_definition(
    instance: Instance, table: Optional[OuterMeasureTable] = None
) -> Report:
    """Disjoint-cover outer measure equals the outer measure on every subset."""
    gate = _gate(instance)
    if gate is not None:
        return gate
    table = table or outer_measure_table(instance)
    for e in range(len(table)):
        alt = disjoint_outer_measure(instance, e, table)
        if alt != table[e]:
            return Report("verify-prop1", Verdict.FAIL,
                          {"set": e, "disjoint": alt, "outer": table[e]})
    return Report("verify-prop1", Verdict.PASS)


def splitting_witness(table: OuterMeasureTable, a: Subset) -> Optional[Subset]:
    """First E (in increasing bitmask order) that ``a`` fails to split, or None."""
    full = (1 << table.n) - 1
    comp = full & ~a
    values = table.values
    for e in range(len(values)):
        if values[e] != values[e & a] + values[e & comp]:
            return e
    return None


def is_measurable(table: OuterMeasureTable, a: Subset) -> bool:
    return splitting_witness(table, a) is None


@dataclass(frozen=True)
class MeasurabilityReport:
    measurable_sets: tuple[Subset, ...]
    failures: dict = field(default_factory=dict)  # non-measurable set -> witness E
    algebra: bool = False


def measurable_sets(table: OuterMeasureTable) -> MeasurabilityReport:
    """Enumerate every measurable subset and check they form an algebra."""
    measurable = []
    failures = {}
    for a in range(len(table)):
        w = splitting_witness(table, a)
        if w is None:
            measurable.append(a)
        else:
            failures[a] = w
    full = (1 << table.n) - 1
    ms = set(measurable)
    algebra = (0 in ms and full in ms
               and all(full & ~a in ms for a in measurable)
               and all(a | b in ms for a in measurable for b in measurable))
    return MeasurabilityReport(tuple(measurable), failures, algebra)


def _gate(instance: Instance) -> Optional[Report]:
    structure = is_quasi_semi_ring(instance.set_class)
    if not structure.quasi_semi_ring:
        return Report("precondition", Verdict.SKIPPED,
                      {"structure_witness": structure.witness},
                      f"class is not a quasi-semi-ring ({structure.message})")
    premeasure = validate_premeasure(instance)
    if not premeasure.passed:
        return Report("precondition", Verdict.SKIPPED, dict(premeasure.witness),
                      f"premeasure validation {premeasure.verdict.value}: {premeasure.reason}")
    return None


def verify_extension_theorem(
    instance: Instance, table: Optional[OuterMeasureTable] = None
) -> Report:
    """Every member splits every subset, and the outer measure equals mu on members."""
    gate = _gate(instance)
    if gate is not None:
        return Report("verify-extension", gate.verdict, gate.witness, gate.reason)
    table = table or outer_measure_table(instance)
    for a, mu in zip(instance.members, instance.measure):
        w = splitting_witness(table, a)
        if w is not None:
            return Report("verify-extension", Verdict.FAIL,
                          {"member": a, "split_witness": w}, "member not measurable")
        if table[a] != mu:
            return Report("verify-extension", Verdict.FAIL,
                          {"member": a, "outer": table[a], "premeasure": mu},
                          "outer measure differs from premeasure")
    return Report("verify-extension", Verdict.PASS)


def verify_outer_measure_axioms(table: OuterMeasureTable) -> Report:
    """Empty set has measure 0, monotone, and subadditive over all pairs."""
    v = table.values
    if v[0] != 0:
        return Report("outer-axioms", Verdict.FAIL, {"property": "empty", "value": v[0]})
    size = len(v)
    for f in range(size):
        for e in submasks(f):
            if v[e] > v[f]:
                return Report("outer-axioms", Verdict.FAIL,
                              {"property": "monotone", "subset": e, "superset": f})
    for e in range(size):
        for f in range(e, size):
            if v[e | f] > v[e] + v[f]:
                return Report("outer-axioms", Verdict.FAIL,
                              {"property": "subadditive", "first": e, "second": f})
    return Report("outer-axioms", Verdict.PASS)
