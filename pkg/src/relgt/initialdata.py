"""Initial data for relative curve counts: properness, classes, partitions, signs.

Constraint elements are opaque ids with contact orders; no geometry is
stored, since only counts, orders, homology tags and the ordering of the
curve sets enter the invariants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .classes import HypersurfaceModel, ManifoldModel, d_of, l_of
from .lattice import LatticeClass


class DataError(ValueError):
    """Malformed initial data or an invalid partition/assignment."""


ElementKey = tuple[str, object]  # ("d1", id) ... ("l3", index)


@dataclass(frozen=True)
class DataClass:
    """The class [I]: counts, contact orders and the Γ orderings.

    Ω-type entries (d1 points, l1 pairs) are unordered, so their orders
    are kept sorted; the Γ entries and the s-values along them keep the
    given order, which is part of the class.
    """

    d1: int
    d2: int
    l1: tuple[int, ...]  # sorted contact orders of the point pairs on V
    l2: tuple[int, ...]  # ordered contact orders of the curve pairs on V
    l3: tuple[int, ...]  # sorted contact orders of the free contacts

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0:
            raise DataError("negative count")
        for s in (*self.l1, *self.l2, *self.l3):
            if s < 1:
                raise DataError("contact orders must be >= 1")
        object.__setattr__(self, "l1", tuple(sorted(self.l1)))
        object.__setattr__(self, "l3", tuple(sorted(self.l3)))

    @property
    def contact_sum(self) -> int:
        return sum(self.l1) + sum(self.l2) + sum(self.l3)

    def is_empty(self) -> bool:
        return self.d1 == 0 and self.d2 == 0 and not (self.l1 or self.l2 or self.l3)


@dataclass(frozen=True)
class InitialData:
    """A concrete set of constraints: point/curve ids plus contact orders."""

    d1_points: tuple[str, ...] = ()
    d2_curves: tuple[str, ...] = ()
    l1_pairs: tuple[tuple[str, int], ...] = ()
    l2_pairs: tuple[tuple[str, int], ...] = ()
    l3_orders: tuple[int, ...] = ()

    def __post_init__(self):
        for name, ids in (
            ("d1_points", self.d1_points),
            ("d2_curves", self.d2_curves),
            ("l1_pairs", tuple(x for x, _ in self.l1_pairs)),
            ("l2_pairs", tuple(x for x, _ in self.l2_pairs)),
        ):
            if len(set(ids)) != len(ids):
                raise DataError(f"duplicate ids in {name}")
        for _, s in (*self.l1_pairs, *self.l2_pairs):
            if s < 1:
                raise DataError("contact orders must be >= 1")
        for s in self.l3_orders:
            if s < 1:
                raise DataError("contact orders must be >= 1")

    def data_class(self) -> DataClass:
        return DataClass(
            d1=len(self.d1_points),
            d2=len(self.d2_curves),
            l1=tuple(s for _, s in self.l1_pairs),
            l2=tuple(s for _, s in self.l2_pairs),
            l3=tuple(self.l3_orders),
        )

    def element_keys(self) -> list[ElementKey]:
        keys: list[ElementKey] = []
        keys += [("d1", x) for x in self.d1_points]
        keys += [("d2", x) for x in self.d2_curves]
        keys += [("l1", x) for x, _ in self.l1_pairs]
        keys += [("l2", x) for x, _ in self.l2_pairs]
        keys += [("l3", i) for i in range(len(self.l3_orders))]
        return keys

    def is_empty(self) -> bool:
        return not (
            self.d1_points
            or self.d2_curves
            or self.l1_pairs
            or self.l2_pairs
            or self.l3_orders
        )


@dataclass
class PropernessReport:
    ok: bool
    failures: list[str]

    def __bool__(self) -> bool:
        return self.ok


def proper_counts(
    d_A: Fraction | int, l_A: int, dc: DataClass
) -> PropernessReport:
    """Clause-by-clause properness check at the level of a data class."""
    failures: list[str] = []
    if d_A < 0:
        if not dc.is_empty():
            failures.append("d_A < 0 requires empty initial data")
        return PropernessReport(not failures, failures)
    l1, l2, l3 = len(dc.l1), len(dc.l2), len(dc.l3)
    if not (0 <= dc.d1 <= d_A):
        failures.append(f"clause (i): d1 = {dc.d1} not in [0, d_A = {d_A}]")
    if not (0 <= dc.d2 <= 2 * d_A):
        failures.append(f"clause (i): d2 = {dc.d2} not in [0, 2 d_A = {2 * d_A}]")
    if not (2 * dc.d1 + dc.d2 <= 2 * d_A):
        failures.append(
            f"clause (i): 2 d1 + d2 = {2 * dc.d1 + dc.d2} exceeds 2 d_A = {2 * d_A}"
        )
    if 2 * dc.d1 + dc.d2 - l2 - 2 * l3 != 2 * (d_A - l_A):
        failures.append(
            "clause (ii): 2 d1 + d2 - l2 - 2 l3 = "
            f"{2 * dc.d1 + dc.d2 - l2 - 2 * l3} != 2(d_A - l_A) = {2 * (d_A - l_A)}"
        )
    if dc.contact_sum != l_A:
        failures.append(
            f"clause (iii): sum of contact orders {dc.contact_sum} != A·V = {l_A}"
        )
    return PropernessReport(not failures, failures)


def is_proper(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    I: InitialData | DataClass,
) -> PropernessReport:
    """Whether I is proper initial data for the class A, with diagnostics."""
    dc = I.data_class() if isinstance(I, InitialData) else I
    return proper_counts(d_of(M, A), l_of(M, V, A), dc)


def dzero_characterization(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    I: InitialData | DataClass,
) -> bool:
    """For d_A = 0: proper iff only free contacts, l3 = A·V, all orders 1."""
    if d_of(M, A) != 0:
        raise DataError("characterization applies only when d_A = 0")
    dc = I.data_class() if isinstance(I, InitialData) else I
    l_A = l_of(M, V, A)
    holds = (
        dc.d1 == 0
        and dc.d2 == 0
        and not dc.l1
        and not dc.l2
        and len(dc.l3) == l_A
        and all(s == 1 for s in dc.l3)
    )
    assert holds == bool(is_proper(M, V, A, dc))
    return holds


def same_class(I: InitialData, J: InitialData) -> bool:
    """Equality of data classes, including the orderings of the Γ sets.

    The element ids double as homology tags: the Γ sequences must agree
    element-for-element, so reordering a Γ set leaves the class.
    """
    return (
        I.data_class() == J.data_class()
        and I.d2_curves == J.d2_curves
        and tuple(x for x, _ in I.l2_pairs) == tuple(x for x, _ in J.l2_pairs)
        and sorted(I.d1_points) == sorted(J.d1_points)
        and sorted(I.l1_pairs) == sorted(J.l1_pairs)
    )


def toroidal_contact_orders(m: int, intersection_count: int) -> list[tuple[int, ...]]:
    """Contact orders of an m-fold covered square-0 torus: (1,...,1) per point."""
    if m < 1:
        raise DataError("cover multiplicity must be positive")
    if intersection_count < 0:
        raise DataError("intersection count must be non-negative")
    return [(1,) * m for _ in range(intersection_count)]


def partition_parity_check(components: Iterable[tuple[int, int]]) -> bool:
    """Each component must carry an even number d2_k + l2_k of curve data."""
    return all((d2 + l2) % 2 == 0 for d2, l2 in components)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _block_permutation_sign(
    ordered_ids: Sequence[str],
    assignment: Mapping[str, int],
    component_order: Sequence[int],
) -> int:
    """Sign of the permutation sorting per-component blocks of a Γ set.

    Each component's elements are taken in ascending reference order and
    the blocks concatenated in the given component order.
    """
    position = {x: i for i, x in enumerate(ordered_ids)}
    concat: list[int] = []
    for comp in component_order:
        block = [position[x] for x in ordered_ids if assignment[x] == comp]
        concat.extend(block)
    return _permutation_sign(concat)


def partition_sign(
    I: InitialData,
    assignment: Mapping[str, int],
    component_order: Sequence[int],
) -> int:
    """sign(π_d2)·sign(π_l2) of the data permutation induced by a partition."""
    gamma_ids = list(I.d2_curves) + [x for x, _ in I.l2_pairs]
    missing = [x for x in gamma_ids if x not in assignment]
    if missing:
        raise DataError(f"assignment missing Γ elements: {missing}")
    s1 = _block_permutation_sign(I.d2_curves, assignment, component_order)
    s2 = _block_permutation_sign(
        [x for x, _ in I.l2_pairs], assignment, component_order
    )
    return s1 * s2


def partition_data(
    I: InitialData, k: int, assignment: Mapping[ElementKey, int]
) -> list[InitialData]:
    """Split I into k disjoint pieces whose union is I, per the assignment."""
    keys = I.element_keys()
    missing = [key for key in keys if key not in assignment]
    if missing:
        raise DataError(f"assignment missing elements: {missing}")
    extra = [key for key in assignment if key not in keys]
    if extra:
        raise DataError(f"assignment references unknown elements: {extra}")
    for key, comp in assignment.items():
        if not (0 <= comp < k):
            raise DataError(f"component index {comp} for {key} out of range")
    pieces = []
    l1_by_id = dict(I.l1_pairs)
    l2_by_id = dict(I.l2_pairs)
    for comp in range(k):
        pieces.append(
            InitialData(
                d1_points=tuple(
                    x for x in I.d1_points if assignment[("d1", x)] == comp
                ),
                d2_curves=tuple(
                    x for x in I.d2_curves if assignment[("d2", x)] == comp
                ),
                l1_pairs=tuple(
                    (x, l1_by_id[x])
                    for x, _ in I.l1_pairs
                    if assignment[("l1", x)] == comp
                ),
                l2_pairs=tuple(
                    (x, l2_by_id[x])
                    for x, _ in I.l2_pairs
                    if assignment[("l2", x)] == comp
                ),
                l3_orders=tuple(
                    s
                    for i, s in enumerate(I.l3_orders)
                    if assignment[("l3", i)] == comp
                ),
            )
        )
    return pieces


def multiset_splits(
    values: Sequence[int], parts: int
) -> Iterable[tuple[tuple[int, ...], ...]]:
    """All ways to split a multiset of orders into `parts` sub-multisets.

    Each distinct tuple of sub-multisets is produced exactly once.
    """
    items = sorted(values)

    def rec(remaining: tuple[int, ...]) -> Iterable[tuple[tuple[int, ...], ...]]:
        yield from _splits(remaining, parts)

    def _splits(vals, nparts):
        if nparts == 1:
            yield (tuple(vals),)
            return
        distinct = sorted(set(vals))
        counts = {v: vals.count(v) for v in distinct}
        # choose the sub-multiset for the first part
        choices = [range(counts[v] + 1) for v in distinct]
        for pick in itertools.product(*choices):
            first = []
            rest = []
            for v, take in zip(distinct, pick):
                first.extend([v] * take)
                rest.extend([v] * (counts[v] - take))
            for tail in _splits(tuple(rest), nparts - 1):
                yield (tuple(first),) + tail

    if parts < 1:
        if not items:
            yield ()
        return
    yield from rec(tuple(items))
