"""Exact verification of Carathéodory extension over quasi-semi-rings.

Finite universes are handled exactly with bitmask subsets and rational
measure values; semi-closed arcs and rectangles are handled symbolically.
"""
__version__ = "0.1.0"

from .setcore import (
    INF,
    CapacityError,
    Instance,
    Report,
    SetClass,
    StructureError,
    Universe,
    Verdict,
    format_measure,
    is_partition,
    measure_sum,
    measure_value,
    parse_measure,
    validate_premeasure,
)
from .structure import (
    Decomposition,
    StructureReport,
    decompose_as_disjoint_union,
    example1_fixture,
    interval_semi_ring,
    is_quasi_semi_ring,
    is_ring,
    is_semi_ring,
    power_set,
)
from .extension import (
    OuterMeasureTable,
    disjoint_outer_measure,
    disjointify,
    is_measurable,
    measurable_sets,
    outer_measure_table,
    splitting_witness,
    verify_alternative_definition,
    verify_extension_theorem,
    verify_outer_measure_axioms,
)
from .uniqueness import (
    GeneratedRing,
    TwoMeasureInstance,
    finite_decomposition,
    generate_ring,
    is_sigma_finite,
    search_uniqueness_counterexample,
    verify_sigma_uniqueness,
    verify_smallest_ring,
    verify_uniqueness_on_ring,
)
from .instances import generate_random_instance, parse_instance, serialize_instance
