"""Generated rings, sigma-finiteness, uniqueness checks, counterexample search."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .extension import OuterMeasureTable, disjointify, outer_measure_table
from .setcore import (
    INF,
    Instance,
    MeasureValue,
    Report,
    SetClass,
    StructureError,
    Subset,
    Verdict,
    atoms_of,
    is_finite,
    is_partition,
    measure_sum,
    validate_premeasure,
)
from .structure import Decomposer, is_quasi_semi_ring, is_ring


def _ring_order(masks) -> tuple[Subset, ...]:
    return tuple(sorted(masks, key=lambda m: (m.bit_count(), m)))


@dataclass(frozen=True)
class GeneratedRing:
    members: tuple[Subset, ...]
    generators: SetClass

    def __contains__(self, mask: object) -> bool:
        return mask in set(self.members)

    def as_class(self) -> SetClass:
        return SetClass(self.generators.universe, self.members)


def generate_ring(set_class: SetClass, check: bool = True) -> GeneratedRing:
    """All finite disjoint unions of members, by pairwise disjoint-union closure."""
    if check and not is_quasi_semi_ring(set_class).quasi_semi_ring:
        raise StructureError("generate_ring needs a quasi-semi-ring")
    seen = set(set_class.members)
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                if not a & b and a | b not in seen:
                    seen.add(a | b)
                    new.append(a | b)
        frontier = new
    return GeneratedRing(_ring_order(seen), set_class)


def ring_closure(set_class: SetClass) -> tuple[Subset, ...]:
    """Closure under union and relative complement; needs no structure at all."""
    seen = set(set_class.members) | {0}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                for c in (a | b, a & ~b, b & ~a):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        frontier = new
    return _ring_order(seen)


def sigma_algebra(set_class: SetClass) -> tuple[Subset, ...]:
    """Closure under complement in the universe and union (finite, so sigma = algebra)."""
    full = set_class.universe.full
    seen = set(set_class.members) | {0, full}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            cands = [full & ~a] + [a | b for b in seen]
            for c in cands:
                if c not in seen:
                    seen.add(c)
                    new.append(c)
        frontier = new
    return _ring_order(seen)


def verify_smallest_ring(set_class: SetClass) -> Report:
    if not is_quasi_semi_ring(set_class).quasi_semi_ring:
        return Report("generate-ring", Verdict.SKIPPED, reason="class is not a quasi-semi-ring")
    ring = generate_ring(set_class, check=False)
    closure = ring_closure(set_class)
    if ring.members != closure:
        extra = sorted(set(closure) ^ set(ring.members))
        return Report("generate-ring", Verdict.FAIL, {"difference": extra[0]},
                      "disjoint-union closure differs from the union/difference closure")
    if not is_ring(ring.as_class()):
        return Report("generate-ring", Verdict.FAIL, reason="result is not a ring")
    return Report("generate-ring", Verdict.PASS, {"size": len(ring.members)})


@dataclass(frozen=True)
class TwoMeasureInstance:
    first: Instance
    second: Instance

    def __post_init__(self) -> None:
        if self.first.universe != self.second.universe:
            raise StructureError("both measures must live on the same universe")
        if self.first.members != self.second.members:
            raise StructureError("both measures must be defined on the same class")

    @property
    def set_class(self) -> SetClass:
        return self.first.set_class

    def first_disagreement(self) -> Optional[Subset]:
        for m, a, b in zip(self.first.members, self.first.measure, self.second.measure):
            if a != b:
                return m
        return None


def _pair_gate(two: TwoMeasureInstance) -> Optional[Report]:
    if not is_quasi_semi_ring(two.set_class).quasi_semi_ring:
        return Report("precondition", Verdict.SKIPPED, reason="class is not a quasi-semi-ring")
    for label, inst in (("first", two.first), ("second", two.second)):
        rep = validate_premeasure(inst)
        if not rep.passed:
            return Report("precondition", Verdict.SKIPPED, {"measure": label},
                          f"{label} premeasure validation {rep.verdict.value}")
    d = two.first_disagreement()
    if d is not None:
        return Report("precondition", Verdict.SKIPPED, {"member": d},
                      "the measures disagree on a class member")
    return None


def _check_ring_agreement(
    two: TwoMeasureInstance, ring: GeneratedRing, t1: OuterMeasureTable, t2: OuterMeasureTable
) -> Optional[Subset]:
    decompose = Decomposer(two.set_class.members)
    mu1 = two.first.measure
    for r in ring.members:
        if t1[r] != t2[r]:
            return r
        # additivity of the extension: value of r is the sum over its pieces
        pieces = decompose(r)
        if pieces is None or t1[r] != measure_sum(mu1[i] for i in pieces):
            return r
    return None


def verify_uniqueness_on_ring(two: TwoMeasureInstance) -> Report:
    """Finite measures agreeing on the class have extensions agreeing on r(A)."""
    gate = _pair_gate(two)
    if gate is not None:
        return Report("verify-uniqueness", gate.verdict, gate.witness, gate.reason)
    for inst in (two.first, two.second):
        if not all(is_finite(v) for v in inst.measure):
            return Report("verify-uniqueness", Verdict.SKIPPED,
                          reason="requires finite measures")
    ring = generate_ring(two.set_class, check=False)
    t1, t2 = outer_measure_table(two.first), outer_measure_table(two.second)
    bad = _check_ring_agreement(two, ring, t1, t2)
    if bad is not None:
        return Report("verify-uniqueness", Verdict.FAIL, {"set": bad})
    return Report("verify-uniqueness", Verdict.PASS, {"ring_size": len(ring.members)})


def is_sigma_finite(instance: Instance) -> tuple[bool, list[Subset]]:
    """Do the finite-measure members cover the universe?  Returns (answer, cover)."""
    cover = [m for m, v in zip(instance.members, instance.measure) if m and is_finite(v)]
    union = 0
    for m in cover:
        union |= m
    return union == instance.universe.full, cover


def finite_decomposition(instance: Instance, member: Subset) -> list[Subset]:
    """Disjoint finite-measure members whose union is ``member``."""
    if member not in instance.set_class:
        raise StructureError("target must be a class member")
    ok, cover = is_sigma_finite(instance)
    if not ok:
        raise StructureError("instance is not sigma-finite (is_sigma_finite is false)")
    set_class = instance.set_class
    decompose = Decomposer(set_class.members)
    values = instance.as_dict()
    pieces: list[Subset] = []
    for h in disjointify(cover, set_class):
        found = decompose(member & h)
        if found is None:
            raise StructureError("class is not a quasi-semi-ring")
        pieces.extend(set_class.members[i] for i in found)
    assert is_partition(pieces, member)
    assert all(is_finite(values[p]) for p in pieces)
    return pieces


def verify_sigma_uniqueness(two: TwoMeasureInstance) -> Report:
    """Sigma-finite measures agreeing on the class agree on r(A) and sigma(A).

    On a finite universe sigma-finiteness puts the whole universe in r(A),
    so r(A) is already the generated sigma-algebra; that is asserted too.
    """
    gate = _pair_gate(two)
    if gate is not None:
        return Report("verify-sigma-uniqueness", gate.verdict, gate.witness, gate.reason)
    for label, inst in (("first", two.first), ("second", two.second)):
        if not is_sigma_finite(inst)[0]:
            return Report("verify-sigma-uniqueness", Verdict.SKIPPED, {"measure": label},
                          f"{label} measure is not sigma-finite")
    set_class = two.set_class
    ring = generate_ring(set_class, check=False)
    full = set_class.universe.full
    if full not in ring:
        return Report("verify-sigma-uniqueness", Verdict.FAIL, {"set": full},
                      "universe missing from r(A) despite sigma-finiteness")
    sigma = sigma_algebra(set_class)
    if sigma != ring.members:
        return Report("verify-sigma-uniqueness", Verdict.FAIL,
                      {"set": sorted(set(sigma) ^ set(ring.members))[0]},
                      "sigma(A) differs from r(A)")
    t1, t2 = outer_measure_table(two.first), outer_measure_table(two.second)
    bad = _check_ring_agreement(two, ring, t1, t2)
    if bad is not None:
        return Report("verify-sigma-uniqueness", Verdict.FAIL, {"set": bad})
    return Report("verify-sigma-uniqueness", Verdict.PASS,
                  {"ring_size": len(ring.members), "sigma_size": len(sigma)})


# -- counterexamples ---------------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    """Two additive measures on the power set, given by atom weights."""

    first: tuple[MeasureValue, ...]
    second: tuple[MeasureValue, ...]
    witness: Subset
    trial: int

    def value(self, weights: Sequence[MeasureValue], mask: Subset) -> MeasureValue:
        return measure_sum(weights[i] for i in atoms_of(mask))


def revalidate(
    instance: Instance, cx: Counterexample, ring: Optional[Sequence[Subset]] = None
) -> bool:
    """Both measures extend mu on the class, differ on the witness, witness outside r(A)."""
    for w in (cx.first, cx.second):
        if len(w) != instance.n or any(v != INF and v < 0 for v in w):
            return False
        for m, mu in zip(instance.members, instance.measure):
            if cx.value(w, m) != mu:
                return False
    if cx.value(cx.first, cx.witness) == cx.value(cx.second, cx.witness):
        return False
    if ring is None:
        ring = ring_closure(instance.set_class)
    return cx.witness not in set(ring)


def _ring_atoms(ring: Sequence[Subset]) -> list[Subset]:
    nonempty = [r for r in ring if r]
    return [r for r in nonempty if not any(s != r and s & ~r == 0 for s in nonempty)]


def _random_weight(rng: random.Random) -> MeasureValue:
    roll = rng.random()
    if roll < 0.1:
        return INF
    if roll < 0.25:
        return Fraction(0)
    return Fraction(rng.randint(1, 12), rng.randint(1, 6))


def _split(rng: random.Random, total: MeasureValue, atoms: list[int]) -> dict[int, MeasureValue]:
    """Random nonnegative split of ``total`` over ``atoms``."""
    if total == INF:
        hot = rng.sample(atoms, rng.randint(1, len(atoms)))
        return {a: (INF if a in hot else _random_weight(rng)) for a in atoms}
    cuts = sorted(Fraction(rng.randint(0, 24), 24) for _ in range(len(atoms) - 1))
    bounds = [Fraction(0), *cuts, Fraction(1)]
    return {a: total * (hi - lo) for a, lo, hi in zip(atoms, bounds, bounds[1:])}


def search_uniqueness_counterexample(
    instance: Instance, seed: int, budget: int, table: Optional[OuterMeasureTable] = None
) -> Optional[Counterexample]:
    """Seeded search for two power-set measures agreeing on the class but not beyond r(A).

    Each trial draws two measures from the same recipe: atoms outside every
    member get free weights (including 0 and infinity), and the value of each
    atom of r(A) is split at random among its atoms.  Trial ``t`` uses its own
    generator seeded from ``(seed, t)``, so hits do not depend on scheduling.
    """
    ring = ring_closure(instance.set_class)
    full = instance.universe.full
    ring_atoms = _ring_atoms(ring)
    covered = 0
    for r in ring_atoms:
        covered |= r
    free = list(atoms_of(full & ~covered))
    splittable = [r for r in ring_atoms if r.bit_count() > 1]
    if not free and not splittable:
        return None  # r(A) is the whole power set
    table = table or outer_measure_table(instance)
    n = instance.n
    for trial in range(budget):
        rng = random.Random(f"{seed}:{trial}")
        drawn = []
        for _ in range(2):
            w: list[MeasureValue] = [Fraction(0)] * n
            for a in free:
                w[a] = _random_weight(rng)
            for r in ring_atoms:
                for a, v in _split(rng, table[r], list(atoms_of(r))).items():
                    w[a] = v
            drawn.append(tuple(w))
        first, second = drawn
        diff = next((i for i in range(n) if first[i] != second[i]), None)
        if diff is None:
            continue
        cx = Counterexample(first, second, 1 << diff, trial)
        if revalidate(instance, cx, ring):
            return cx
    return None
