"""Quasi-semi-ring, semi-ring, ring and algebra predicates.

Everything reduces to one primitive: can a target subset be written as a
finite disjoint union of class members?  That is an exact-cover question,
answered by depth-first search branching on the lowest uncovered atom.
Decomposability depends only on the target, so one :class:`Decomposer` is
shared across the whole pair loop of a predicate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .setcore import SetClass, StructureError, Subset, Universe, lowest_atom


@dataclass(frozen=True)
class Decomposition:
    target: Subset
    pieces: tuple[int, ...]  # indices into the class, never the empty member

    def masks(self, set_class: SetClass) -> list[Subset]:
        return [set_class.members[i] for i in self.pieces]


class Decomposer:
    """Memoised exact-cover search over a fixed, ordered class."""

    def __init__(self, members: Sequence[Subset]):
        self.members = tuple(members)
        self._index = {m: i for i, m in enumerate(self.members)}
        self._nonempty = [(i, m) for i, m in enumerate(self.members) if m]
        self._memo: dict[Subset, Optional[tuple[int, ...]]] = {0: ()}

    def __call__(self, target: Subset) -> Optional[tuple[int, ...]]:
        if target in self._memo:
            return self._memo[target]
        # A member equal to the target is its own canonical decomposition.
        if target in self._index:
            result: Optional[tuple[int, ...]] = (self._index[target],)
        else:
            result = None
            low = lowest_atom(target)
            for i, m in self._nonempty:
                if m & low and m & ~target == 0:
                    rest = self(target ^ m)
                    if rest is not None:
                        result = (i, *rest)
                        break
        self._memo[target] = result
        return result


def decompose_as_disjoint_union(
    target: Subset, set_class: SetClass, decomposer: Optional[Decomposer] = None
) -> Optional[Decomposition]:
    """Return a disjoint decomposition of ``target`` into members, or None."""
    if target & ~set_class.universe.full:
        raise StructureError("target lies outside the class's universe")
    decomposer = decomposer or Decomposer(set_class.members)
    pieces = decomposer(target)
    if pieces is None:
        return None
    return Decomposition(target, pieces)


@dataclass(frozen=True)
class StructureReport:
    quasi_semi_ring: bool
    semi_ring: bool = False
    ring: bool = False
    algebra: bool = False
    # (A, B, target) for the first failing ordered pair, or a message.
    witness: Optional[tuple[Subset, Subset, Subset]] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.quasi_semi_ring


def _qsr_witness(set_class: SetClass, decomposer: Decomposer):
    members = set_class.members
    for a in members:
        for b in members:
            for target in (a & b, a & ~b):
                if decomposer(target) is None:
                    return (a, b, target)
    return None


def is_quasi_semi_ring(set_class: SetClass) -> StructureReport:
    """Decide the quasi-semi-ring axioms, then the stronger levels on top.

    The witness, when present, is the first ordered pair (A, B) in class
    order for which A & B or A & ~B (in that order) has no decomposition.
    """
    if not set_class.has_empty:
        return StructureReport(False, message="missing empty set")
    decomposer = Decomposer(set_class.members)
    witness = _qsr_witness(set_class, decomposer)
    if witness is not None:
        return StructureReport(False, witness=witness,
                               message="no disjoint decomposition of target")
    semi = _semi_ring(set_class, decomposer)
    ring = semi and is_ring(set_class)
    algebra = ring and set_class.universe.full in set_class
    return StructureReport(True, semi, ring, algebra)


classify = is_quasi_semi_ring


def _semi_ring(set_class: SetClass, decomposer: Decomposer) -> bool:
    members = set_class.members
    for a in members:
        for b in members:
            if a & b not in set_class or decomposer(a & ~b) is None:
                return False
    return True


def is_semi_ring(set_class: SetClass) -> bool:
    """Contains the empty set, intersection-closed, differences decompose."""
    if not set_class.has_empty:
        return False
    return _semi_ring(set_class, Decomposer(set_class.members))


def is_ring(set_class: SetClass) -> bool:
    """Contains the empty set and is closed under union and relative complement."""
    if not set_class.has_empty:
        return False
    members = set_class.members
    for a in members:
        for b in members:
            if a | b not in set_class or a & ~b not in set_class:
                return False
    # follows from the two closures above; asserted to catch regressions
    assert all(a & b in set_class for a in members for b in members)
    return True


def is_algebra(set_class: SetClass) -> bool:
    return is_ring(set_class) and set_class.universe.full in set_class


# -- fixtures ----------------------------------------------------------------

VENN_ATOMS = ("ABC", "ABc", "AbC", "Abc", "aBC", "aBc", "abC", "abc")


def example1_fixture(empty_regions: Sequence[str] = ()) -> SetClass:
    """Nine-member Venn-region class built from three sets A, B, C.

    Atoms are the eight Venn regions; an upper-case letter means "inside",
    lower-case means "outside" (``"aBc"`` is A^c & B & C^c).  Members, in
    order: empty, A, B, ABC, ABc, AbC, Abc, aBC, aBc.

    ``empty_regions`` removes regions to model degenerate A, B, C; members
    that collapse onto each other are kept once.  This variant is not
    guaranteed to be a quasi-semi-ring.
    """
    dropped = set(empty_regions)
    if not dropped <= set(VENN_ATOMS):
        raise StructureError(f"unknown Venn regions {sorted(dropped - set(VENN_ATOMS))}")
    kept = [r for r in VENN_ATOMS if r not in dropped]
    if not kept:
        raise StructureError("every Venn region removed")
    universe = Universe(tuple(kept))

    def region_set(*regions: str) -> Subset:
        return universe.subset(*(r for r in regions if r not in dropped))

    listed = [
        0,
        region_set("ABC", "ABc", "AbC", "Abc"),
        region_set("ABC", "ABc", "aBC", "aBc"),
        region_set("ABC"),
        region_set("ABc"),
        region_set("AbC"),
        region_set("Abc"),
        region_set("aBC"),
        region_set("aBc"),
    ]
    members = list(dict.fromkeys(listed))
    return SetClass(universe, tuple(members))


def interval_semi_ring(n: int) -> SetClass:
    """Empty set plus every contiguous range of atoms 1..n."""
    if n < 1:
        raise StructureError("n must be at least 1")
    universe = Universe.of_size(n)
    members = [0]
    for i in range(n):
        for j in range(i, n):
            members.append(((1 << (j + 1)) - 1) ^ ((1 << i) - 1))
    return SetClass(universe, tuple(members))


def power_set(universe: Universe) -> SetClass:
    return SetClass(universe, tuple(range(1 << universe.n)))
