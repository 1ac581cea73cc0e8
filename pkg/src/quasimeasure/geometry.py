"""Semi-closed circle arcs and semi-closed axis-aligned rectangles.

Arcs live on a parameter circle of circumference 2, measured in units of pi,
so (1, 3/2] stands for (pi, 3pi/2].  An arc (a, b] is the set of points p
with a < p' <= b where p' is p shifted by a multiple of 2 into (a, a + 2].

Rectangles are (x1, x2] x (y1, y2].  The class of interest excludes squares;
any square produced by an intersection or difference is cut into two
non-square strips of heights s/3 and 2s/3.

All coordinates are Fractions; nothing here touches floating point.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

CIRCUMFERENCE = Fraction(2)


# -- arcs --------------------------------------------------------------------

def _wrap(x: Fraction) -> Fraction:
    return x % CIRCUMFERENCE


@dataclass(frozen=True)
class Arc:
    """Half-open arc (start, end]; stored canonically with start in [0, 2)."""

    start: Fraction
    end: Fraction

    def __post_init__(self) -> None:
        start, end = Fraction(self.start), Fraction(self.end)
        length = end - start
        if not 0 < length <= CIRCUMFERENCE:
            raise ValueError(f"arc length must be in (0, 2], got {length}")
        if length == CIRCUMFERENCE:
            start = Fraction(0)
        else:
            start = _wrap(start)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", start + length)

    @property
    def length(self) -> Fraction:
        return self.end - self.start

    @property
    def is_full(self) -> bool:
        return self.length == CIRCUMFERENCE

    def contains(self, p: Fraction) -> bool:
        shifted = self.start + _wrap(Fraction(p) - self.start)
        if shifted == self.start:
            shifted += CIRCUMFERENCE
        return shifted <= self.end

    def complement(self) -> Optional["Arc"]:
        if self.is_full:
            return None
        return Arc(self.end, self.start + CIRCUMFERENCE)

    def __str__(self) -> str:
        return f"({_pi(self.start)}, {_pi(self.end)}]"


def _pi(x: Fraction) -> str:
    if x == 0:
        return "0"
    num = "" if x.numerator == 1 else str(x.numerator)
    return f"{num}π" if x.denominator == 1 else f"{num}π/{x.denominator}"


@dataclass(frozen=True)
class ArcSet:
    pieces: tuple[Arc, ...] = ()

    def __post_init__(self) -> None:
        pieces = tuple(sorted(self.pieces, key=lambda a: a.start))
        object.__setattr__(self, "pieces", pieces)
        for i, a in enumerate(pieces):
            for b in pieces[i + 1:]:
                if _arc_overlap(a, b):
                    raise ValueError(f"arcs {a} and {b} overlap")

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    @property
    def length(self) -> Fraction:
        return sum((a.length for a in self.pieces), Fraction(0))

    def contains(self, p: Fraction) -> bool:
        return any(a.contains(p) for a in self.pieces)

    def __str__(self) -> str:
        return " ∪ ".join(str(a) for a in self.pieces) if self.pieces else "∅"


def _segments(a: Arc) -> list[tuple[Fraction, Fraction]]:
    """``a`` as real intervals (lo, hi] inside (0, 2]."""
    if a.end <= CIRCUMFERENCE:
        return [(a.start, a.end)]
    return [(a.start, CIRCUMFERENCE), (Fraction(0), a.end - CIRCUMFERENCE)]


def _arc_overlap(a: Arc, b: Arc) -> bool:
    return any(max(l1, l2) < min(h1, h2)
               for l1, h1 in _segments(a) for l2, h2 in _segments(b))


def _merge_segments(segs: Iterable[tuple[Fraction, Fraction]]) -> ArcSet:
    """Turn disjoint real intervals inside (0, 2] into canonical arcs."""
    segs = sorted(segs)
    merged: list[list[Fraction]] = []
    for lo, hi in segs:
        if merged and merged[-1][1] == lo:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == CIRCUMFERENCE:
        first = merged.pop(0)
        merged[-1][1] = CIRCUMFERENCE + first[1]
    return ArcSet(tuple(Arc(lo, hi) for lo, hi in merged))


def arc_intersect(a: Arc, b: Arc) -> ArcSet:
    segs = []
    for l1, h1 in _segments(a):
        for l2, h2 in _segments(b):
            lo, hi = max(l1, l2), min(h1, h2)
            if lo < hi:
                segs.append((lo, hi))
    return _merge_segments(segs)


def arc_intersect_complement(a: Arc, b: Arc) -> ArcSet:
    """Points of ``a`` outside ``b``."""
    comp = b.complement()
    if comp is None:
        return ArcSet()
    return arc_intersect(a, comp)


# -- rectangles --------------------------------------------------------------

@dataclass(frozen=True)
class Rect:
    """(x1, x2] x (y1, y2]; squares are representable but not class members."""

    x1: Fraction
    x2: Fraction
    y1: Fraction
    y2: Fraction

    def __post_init__(self) -> None:
        for name in ("x1", "x2", "y1", "y2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def base(self) -> Fraction:
        return self.x2 - self.x1

    @property
    def height(self) -> Fraction:
        return self.y2 - self.y1

    @property
    def area(self) -> Fraction:
        return self.base * self.height

    @property
    def is_square(self) -> bool:
        return self.base == self.height

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return self.x1 < x <= self.x2 and self.y1 < y <= self.y2

    def __str__(self) -> str:
        return f"({self.x1},{self.x2}]×({self.y1},{self.y2}]"


@dataclass(frozen=True)
class RectSet:
    pieces: tuple[Rect, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for i, r in enumerate(self.pieces):
            if r.is_square:
                raise ValueError(f"square {r} is not a class member")
            for s in self.pieces[i + 1:]:
                if _rect_box(r, s) is not None:
                    raise ValueError(f"rectangles {r} and {s} overlap")

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    @property
    def area(self) -> Fraction:
        return sum((r.area for r in self.pieces), Fraction(0))

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return any(r.contains(x, y) for r in self.pieces)

    def __str__(self) -> str:
        return " ∪ ".join(str(r) for r in self.pieces) if self.pieces else "∅"


def split_square(r: Rect) -> list[Rect]:
    """Leave non-squares alone; cut a square of side s at height s/3."""
    if not r.is_square:
        return [r]
    cut = r.y1 + r.height / 3
    return [Rect(r.x1, r.x2, r.y1, cut), Rect(r.x1, r.x2, cut, r.y2)]


def _rect_box(a: Rect, b: Rect) -> Optional[Rect]:
    x1, x2 = max(a.x1, b.x1), min(a.x2, b.x2)
    y1, y2 = max(a.y1, b.y1), min(a.y2, b.y2)
    if x1 < x2 and y1 < y2:
        return Rect(x1, x2, y1, y2)
    return None


def rect_intersect(a: Rect, b: Rect) -> RectSet:
    box = _rect_box(a, b)
    if box is None:
        return RectSet()
    return RectSet(tuple(split_square(box)))


def rect_difference(a: Rect, b: Rect) -> RectSet:
    """``a`` minus ``b`` as at most four guillotine strips, squares split.

    Inputs may be squares; outputs never are.
    """
    box = _rect_box(a, b)
    if box is None:
        return RectSet(tuple(split_square(a)))
    strips = []
    if a.x1 < box.x1:
        strips.append(Rect(a.x1, box.x1, a.y1, a.y2))
    if box.x2 < a.x2:
        strips.append(Rect(box.x2, a.x2, a.y1, a.y2))
    if a.y1 < box.y1:
        strips.append(Rect(box.x1, box.x2, a.y1, box.y1))
    if box.y2 < a.y2:
        strips.append(Rect(box.x1, box.x2, box.y2, a.y2))
    return RectSet(tuple(p for s in strips for p in split_square(s)))


def piece_measure(x: Union[ArcSet, RectSet, Arc, Rect]) -> Fraction:
    """Total length (in units of pi) or area."""
    if isinstance(x, (ArcSet, Arc)):
        return x.length
    return x.area


# -- randomized verification -------------------------------------------------

@dataclass
class GeometryReport:
    passed: bool = True
    trials: int = 0
    max_pieces: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def fail(self, what: str, *args) -> None:
        self.passed = False
        if len(self.failures) < 10:
            self.failures.append((what, *args))


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


def random_arc(rng: random.Random, denom: int = 12, restricted: bool = False) -> Arc:
    if restricted:
        lo = rng.randint(0, 2 * denom - 1)
        hi = rng.randint(lo + 1, 2 * denom)
        return Arc(Fraction(lo, denom), Fraction(hi, denom))
    start = Fraction(rng.randint(0, 2 * denom - 1), denom)
    return Arc(start, start + Fraction(rng.randint(1, 2 * denom), denom))


def arc_probes(rng: random.Random, arcs: Iterable[Arc], count: int, denom: int) -> list[Fraction]:
    """Random rational points plus every endpoint and its nearest neighbours."""
    fine = 4 * denom
    probes = [Fraction(rng.randint(0, 2 * fine - 1), fine) for _ in range(count)]
    eps = Fraction(1, 8 * fine)
    for a in arcs:
        for p in (a.start, a.end):
            probes.extend((p - eps, p, p + eps))
    return probes


def _common_scale(values: Iterable[Fraction]) -> int:
    return math.lcm(*(v.denominator for v in values))


def _to_grid(v: Fraction, scale: int) -> int:
    """``v * scale`` for a ``scale`` that ``v``'s denominator divides."""
    return v.numerator * (scale // v.denominator)


def _scaled_arc_member(p: int, lo: int, hi: int, period: int) -> bool:
    q = (p - lo) % period or period
    return q <= hi - lo


def _scaled_arcs(arcs: Iterable[Arc], scale: int) -> list[tuple[int, int]]:
    return [(_to_grid(a.start, scale), _to_grid(a.end, scale)) for a in arcs]


def _check_arc_pair(a: Arc, b: Arc, probes, report: GeometryReport) -> None:
    inter = arc_intersect(a, b)
    diff = arc_intersect_complement(a, b)
    report.max_pieces = max(report.max_pieces, len(inter), len(diff))
    if len(inter) > 2 or len(diff) > 2:
        report.fail("too many pieces", a, b)
    if inter.length + diff.length != a.length:
        report.fail("length additivity", a, b)
    # Every coordinate is rescaled to a common integer grid: exact, and far
    # cheaper than Fraction arithmetic per probe.
    pieces = (a, b, *inter, *diff)
    scale = _common_scale([*probes, *(v for arc in pieces for v in (arc.start, arc.end))])
    period = 2 * scale
    (sa, sb), si, sd = _scaled_arcs((a, b), scale), _scaled_arcs(inter, scale), _scaled_arcs(diff, scale)
    for p in probes:
        q = _to_grid(p, scale)
        in_a = _scaled_arc_member(q, *sa, period)
        in_b = _scaled_arc_member(q, *sb, period)
        got_i = any(_scaled_arc_member(q, lo, hi, period) for lo, hi in si)
        got_d = any(_scaled_arc_member(q, lo, hi, period) for lo, hi in sd)
        if got_i != (in_a and in_b) or got_d != (in_a and not in_b):
            report.fail("membership", a, b, p)
            break


def verify_arc_qsr(samples: int = 1000, seed: int = 42, probes: int = 1000,
                   denom: int = 12) -> GeometryReport:
    """Random arc pairs decompose into at most two disjoint arcs each way.

    Also records the (0, 3pi/2], (pi, 5pi/2] pair whose intersection is two
    arcs (so arcs are not intersection-closed) and checks that arcs confined
    to (0, 2pi] never produce a two-piece intersection.
    """
    report = GeometryReport()
    for t in range(samples):
        rng = _trial_rng(seed, t)
        a, b = random_arc(rng, denom), random_arc(rng, denom)
        _check_arc_pair(a, b, arc_probes(rng, (a, b), probes, denom), report)
        report.trials += 1

    a, b = Arc(0, Fraction(3, 2)), Arc(1, Fraction(5, 2))
    inter = arc_intersect(a, b)
    report.notes["witness_intersection"] = str(inter)
    report.notes["semi_ring_violated"] = len(inter) == 2
    if len(inter) != 2:
        report.fail("witness pair did not split", a, b)

    restricted_single = True
    for t in range(samples):
        rng = _trial_rng(seed, samples + t)
        a, b = random_arc(rng, denom, True), random_arc(rng, denom, True)
        if len(arc_intersect(a, b)) > 1:
            restricted_single = False
            report.fail("restricted arcs split", a, b)
    report.notes["restricted_semi_ring"] = restricted_single
    return report


def random_rect(rng: random.Random, denom: int = 4, span: int = 4) -> Rect:
    while True:
        x1 = Fraction(rng.randint(0, span * denom), denom)
        y1 = Fraction(rng.randint(0, span * denom), denom)
        w = Fraction(rng.randint(1, span * denom), denom)
        h = Fraction(rng.randint(1, span * denom), denom)
        if w != h:
            return Rect(x1, x1 + w, y1, y1 + h)


def rect_probes(rng: random.Random, rects: Iterable[Rect], count: int,
                denom: int, span: int) -> list[tuple[Fraction, Fraction]]:
    fine = 6 * denom  # also resolves the s/3 cut lines
    hi = 2 * span * fine
    pts = [(Fraction(rng.randint(0, hi), fine), Fraction(rng.randint(0, hi), fine))
           for _ in range(count)]
    eps = Fraction(1, 12 * fine)
    xs = sorted({v for r in rects for v in (r.x1, r.x2)})
    ys = sorted({v for r in rects for v in (r.y1, r.y2)})
    for x in xs:
        for y in ys:
            for dx in (-eps, 0, eps):
                for dy in (-eps, 0, eps):
                    pts.append((x + dx, y + dy))
    return pts


def verify_rect_qsr(samples: int = 1000, seed: int = 42, probes: int = 1000,
                    denom: int = 4, span: int = 4) -> GeometryReport:
    """Random rectangle pairs: non-square disjoint pieces, exact area, sound membership."""
    report = GeometryReport()
    for t in range(samples):
        rng = _trial_rng(seed, t)
        a, b = random_rect(rng, denom, span), random_rect(rng, denom, span)
        inter, diff = rect_intersect(a, b), rect_difference(a, b)
        report.max_pieces = max(report.max_pieces, len(inter), len(diff))
        if len(diff) > 8:
            report.fail("too many pieces", a, b)
        if inter.area + diff.area != a.area:
            report.fail("area additivity", a, b)
        rects = (a, b, *inter, *diff)
        pts = rect_probes(rng, rects, probes, denom, span)
        scale = _common_scale([*(c for pt in pts for c in pt),
                               *(v for r in rects for v in (r.x1, r.x2, r.y1, r.y2))])
        boxes = [tuple(_to_grid(v, scale) for v in (r.x1, r.x2, r.y1, r.y2)) for r in rects]
        ba, bb, bi, bd = boxes[0], boxes[1], boxes[2:2 + len(inter)], boxes[2 + len(inter):]
        inside = lambda x, y, r: r[0] < x <= r[1] and r[2] < y <= r[3]
        for x, y in pts:
            sx, sy = _to_grid(x, scale), _to_grid(y, scale)
            in_a, in_b = inside(sx, sy, ba), inside(sx, sy, bb)
            got_i = any(inside(sx, sy, r) for r in bi)
            got_d = any(inside(sx, sy, r) for r in bd)
            if got_i != (in_a and in_b) or got_d != (in_a and not in_b):
                report.fail("membership", a, b, (x, y))
                break
        report.trials += 1

    a, b = Rect(0, 2, 0, 3), Rect(0, 3, 0, 2)
    inter = rect_intersect(a, b)
    report.notes["square_split"] = str(inter)
    if inter.area != 4 or len(inter) != 2:
        report.fail("square split", a, b)
    return report
