import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quasimeasure.setcore import (
    INF,
    Instance,
    SetClass,
    StructureError,
    Universe,
    Verdict,
    format_measure,
    is_partition,
    iter_partitions,
    measure_sum,
    measure_value,
    parse_measure,
    validate_premeasure,
)
from quasimeasure.structure import interval_semi_ring

from oracles import partitions

N = 6
FULL = (1 << N) - 1
masks = st.integers(0, FULL)
finite_values = st.fractions(min_value=0, max_value=100, max_denominator=50)
values = st.one_of(finite_values, st.just(INF))


def test_is_partition_examples():
    assert is_partition([0b01, 0b10], 0b11)
    assert is_partition([], 0)
    assert not is_partition([0b01, 0b11], 0b11)
    assert not is_partition([0b01], 0b11)


def test_is_partition_rejects_foreign_masks():
    with pytest.raises(StructureError):
        is_partition([0b100], 0b100, n=2)


def test_measure_sum_examples():
    assert measure_sum([Fraction(1, 2), Fraction(1, 3)]) == Fraction(5, 6)
    assert measure_sum([INF, Fraction(7)]) == INF
    assert measure_sum([]) == 0


@given(masks, masks)
def test_subset_algebra_laws(a, b):
    comp = lambda x: FULL & ~x
    assert a & comp(a) == 0
    assert comp(comp(a)) == a
    assert comp(a | b) == comp(a) & comp(b)
    assert comp(a & b) == comp(a) | comp(b)


@given(st.lists(values, max_size=8), st.randoms())
def test_measure_sum_commutative(vals, rnd):
    shuffled = list(vals)
    rnd.shuffle(shuffled)
    assert measure_sum(vals) == measure_sum(shuffled)


@given(st.lists(values, max_size=8), st.integers(0, 8))
def test_measure_sum_associative(vals, cut):
    left, right = vals[:cut], vals[cut:]
    assert measure_sum([measure_sum(left), measure_sum(right)]) == measure_sum(vals)
    if INF in vals:
        assert measure_sum(vals) == INF


@given(finite_values)
def test_fraction_text_round_trip(v):
    text = format_measure(v)
    back = parse_measure(text)
    assert back == v and type(back) is Fraction
    assert (back.numerator, back.denominator) == (v.numerator, v.denominator)


def test_parse_measure_formats():
    assert parse_measure("inf") == INF
    assert parse_measure("6/4") == Fraction(3, 2)
    assert parse_measure("7") == 7
    for bad in ("1/0", "a/b", "-1", "1.5", "", "1/", "/2"):
        with pytest.raises(ValueError):
            parse_measure(bad)


def test_measure_value_rejects_inexact():
    with pytest.raises(ValueError):
        measure_value(0.5)
    assert measure_value(math.inf) == INF


def test_universe_labels_and_keys():
    u = Universe(("b", "a", "c"))
    m = u.subset("c", "a")
    assert u.key(m) == "a,c"
    assert u.from_key("a,c") == m
    assert u.from_key("") == 0
    with pytest.raises(StructureError):
        Universe(("a", "a"))
    with pytest.raises(StructureError):
        u.subset("z")


def _counting(set_class):
    return Instance.from_atom_weights(set_class, [1] * set_class.universe.n)


def test_validate_interval_counting_passes():
    inst = _counting(interval_semi_ring(3))
    assert validate_premeasure(inst).verdict is Verdict.PASS


def test_partition_enumeration_matches_brute_force():
    c = interval_semi_ring(4)
    for target in c.members:
        got = sorted(tuple(sorted(c.members[i] for i in p))
                     for p in iter_partitions(target, c.members))
        want = sorted(tuple(sorted(f)) for f in partitions(target, c.members))
        assert got == want


def test_validate_rejects_nonzero_empty():
    u = Universe.of_size(1)
    inst = Instance(u, (0, 1), (1, 1))
    assert validate_premeasure(inst).verdict is Verdict.FAIL


def test_validate_reports_additivity_witness():
    u = Universe.of_size(2)
    inst = Instance(u, (0, 0b01, 0b10, 0b11), (0, 1, 1, 5))
    rep = validate_premeasure(inst)
    assert rep.verdict is Verdict.FAIL
    assert rep.witness == {"target": 0b11, "partition": [0b01, 0b10],
                           "expected": 2, "actual": 5}


def test_validate_inconclusive_on_node_cap():
    u = Universe.of_size(6)
    c = SetClass(u, tuple(range(64)))
    inst = Instance.from_atom_weights(c, [1] * 6)
    rep = validate_premeasure(inst, node_cap=50)
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert rep.witness["node_cap"] == 50


@given(st.randoms(use_true_random=False))
def test_validated_premeasure_is_additive_on_random_disjoint_families(rnd):
    n = 5
    u = Universe.of_size(n)
    members = sorted({0} | {rnd.randrange(1, 1 << n) for _ in range(8)})
    weights = [Fraction(rnd.randint(0, 5), rnd.randint(1, 3)) for _ in range(n)]
    inst = Instance.from_atom_weights(SetClass(u, tuple(members)), weights)
    if rnd.random() < 0.5:
        # perturb one value so some instances fail validation
        i = rnd.randrange(1, len(members))
        inst = Instance(u, inst.members,
                        inst.measure[:i] + (inst.measure[i] + 1,) + inst.measure[i + 1:])
    if not validate_premeasure(inst).passed:
        return
    mu = inst.as_dict()
    for _ in range(20):
        fam = [m for m in members if m and rnd.random() < 0.4]
        seen, disjoint = 0, []
        for m in fam:
            if not seen & m:
                disjoint.append(m)
                seen |= m
        if seen in mu and len(disjoint) > 1:
            assert measure_sum(mu[m] for m in disjoint) == mu[seen]
