"""Admissible decompositions, combinatorial weights and the GT resummation.

The decomposition set S(A) is enumerated over a finite support set of
classes (the classes a supplied invariant table can see); the GT value is
assembled from connected-count and torus-count table entries, with the
combinatorial weight available in three modes because the printed weight
formula and the worked genus-0 example disagree (see per_factor and
gt_from_ru).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .classes import (
    HypersurfaceModel,
    ManifoldModel,
    d_of,
    divisibility,
    genus_of,
    is_multiply_toroidal,
    is_toroidal,
    l_of,
)
from .initialdata import (
    DataClass,
    InitialData,
    _permutation_sign,
    multiset_splits,
    proper_counts,
)
from .lattice import IntegralLattice, LatticeClass, pairing, square


class DecompositionError(ValueError):
    """Invalid decomposition input or unsatisfied hypotheses."""


@dataclass(frozen=True)
class Decomposition:
    """An unordered set of (class, multiplicity) pairs summing to a target."""

    pairs: tuple[tuple[LatticeClass, int], ...]

    def __init__(self, pairs: Iterable[tuple[LatticeClass, int]]):
        canon = tuple(sorted(((c, int(m)) for c, m in pairs), key=lambda p: p[0].coords))
        object.__setattr__(self, "pairs", canon)

    def total(self) -> LatticeClass:
        if not self.pairs:
            raise DecompositionError("empty decomposition has no total")
        acc = LatticeClass((0,) * len(self.pairs[0][0]))
        for c, m in self.pairs:
            acc = acc + m * c
        return acc

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def validate_decomposition(
    M: ManifoldModel,
    A: LatticeClass,
    y: Decomposition,
    require_nonneg_d: bool = False,
) -> None:
    """Re-check the four structural conditions on a decomposition of A."""
    classes = [c for c, _ in y.pairs]
    if len({c.coords for c in classes}) != len(classes):
        raise DecompositionError("classes must be distinct")
    for c, m in y.pairs:
        if m < 1:
            raise DecompositionError("multiplicities must be positive")
        if is_multiply_toroidal(M, c):
            raise DecompositionError(f"class {list(c.coords)} is multiply toroidal")
        if m > 1 and square(M.lattice, c) != 0:
            raise DecompositionError(
                f"multiplicity {m} on class of nonzero square {list(c.coords)}"
            )
        if require_nonneg_d and d_of(M, c) < 0:
            raise DecompositionError(f"class {list(c.coords)} has negative dimension")
    for (c1, _), (c2, _) in itertools.combinations(y.pairs, 2):
        if pairing(M.lattice, c1, c2) != 0:
            raise DecompositionError(
                f"classes {list(c1.coords)} and {list(c2.coords)} not orthogonal"
            )
    if y.total().coords != A.coords:
        raise DecompositionError("pairs do not sum to the target class")


def _in_rational_span(vectors: Sequence[LatticeClass], target: LatticeClass) -> bool:
    """Whether target lies in the Q-span of the given coordinate vectors."""
    if target.is_zero():
        return True
    if not vectors:
        return False
    n = len(target)
    rows = [[Fraction(c) for c in v.coords] for v in vectors]
    tgt = [Fraction(c) for c in target.coords]
    pivot_cols: list[int] = []
    reduced: list[list[Fraction]] = []
    for row in rows:
        row = row[:]
        for col, red in zip(pivot_cols, reduced):
            if row[col] != 0:
                f = row[col] / red[col]
                for i in range(n):
                    row[i] -= f * red[i]
        lead = next((i for i in range(n) if row[i] != 0), None)
        if lead is not None:
            pivot_cols.append(lead)
            reduced.append(row)
    for col, red in zip(pivot_cols, reduced):
        if tgt[col] != 0:
            f = tgt[col] / red[col]
            for i in range(n):
                tgt[i] -= f * red[i]
    return all(x == 0 for x in tgt)


def enumerate_S(
    M: ManifoldModel,
    A: LatticeClass,
    support: Sequence[LatticeClass],
    positive_form: LatticeClass | None = None,
    max_multiplicity: int = 64,
    require_nonneg_d: bool = False,
) -> list[Decomposition]:
    """All decompositions of A drawn from `support` satisfying S(A).

    Multiplicities of square-0 classes are bounded by pairing against
    `positive_form` when one is supplied (it must pair positively with
    every usable support class); otherwise by `max_multiplicity` together
    with rational-span pruning.  The optional `require_nonneg_d` flag adds
    the d >= 0 condition the component definition imposes.
    """
    M.lattice.check_member(A, "target class")
    usable: list[LatticeClass] = []
    seen = set()
    for c in support:
        M.lattice.check_member(c, "support class")
        if c.coords in seen or c.is_zero():
            continue
        seen.add(c.coords)
        if is_multiply_toroidal(M, c):
            continue
        if require_nonneg_d and d_of(M, c) < 0:
            continue
        usable.append(c)
    usable.sort(key=lambda c: c.coords)

    if positive_form is not None:
        M.lattice.check_member(positive_form, "positive form")
        for c in usable:
            if pairing(M.lattice, positive_form, c) <= 0:
                raise DecompositionError(
                    "positive_form does not pair positively with support class "
                    f"{list(c.coords)}"
                )

    results: list[Decomposition] = []
    chosen: list[tuple[LatticeClass, int]] = []

    def mult_bound(c: LatticeClass, remaining: LatticeClass) -> int:
        if positive_form is not None:
            num = pairing(M.lattice, positive_form, remaining)
            den = pairing(M.lattice, positive_form, c)
            return max(0, num // den)
        return max_multiplicity

    def rec(idx: int, remaining: LatticeClass) -> None:
        # remaining is nonzero here; zero sums are recorded by the caller
        if idx == len(usable):
            return
        suffix = usable[idx:]
        if not _in_rational_span(suffix, remaining):
            return
        c = suffix[0]
        if any(pairing(M.lattice, c, prev) != 0 for prev, _ in chosen):
            rec(idx + 1, remaining)
            return
        # m = 0 branch
        rec(idx + 1, remaining)
        hi = 1 if square(M.lattice, c) != 0 else mult_bound(c, remaining)
        r = remaining
        for m in range(1, hi + 1):
            r = r - c
            chosen.append((c, m))
            if r.is_zero():
                results.append(Decomposition(chosen))
            else:
                rec(idx + 1, r)
            chosen.pop()

    if not A.is_zero():
        rec(0, A)
    uniq = {y.pairs: y for y in results}
    out = sorted(
        uniq.values(), key=lambda y: tuple((c.coords, mm) for c, mm in y.pairs)
    )
    for y in out:
        validate_decomposition(M, A, y, require_nonneg_d=require_nonneg_d)
    return out


def tau(
    M: ManifoldModel, y: Decomposition
) -> tuple[list[tuple[LatticeClass, int]], list[tuple[LatticeClass, int]]]:
    """Split y into pairs with A² != 0 or c1(A) != 0 and their complement.

    c1(A) = -K·A; the complement consists of the toroidal components whose
    contribution is a torus count rather than a connected count.
    """
    tau_pairs: list[tuple[LatticeClass, int]] = []
    non_tau: list[tuple[LatticeClass, int]] = []
    for c, m in y.pairs:
        if square(M.lattice, c) != 0 or pairing(M.lattice, M.K, c) != 0:
            tau_pairs.append((c, m))
        else:
            non_tau.append((c, m))
    return tau_pairs, non_tau


def _fact(n: int) -> int:
    return math.factorial(n)


def per_factor(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    y: Decomposition,
    assignment_counts: Sequence[tuple[int, int, int, int, int]],
    mode: str = "unit",
) -> Fraction:
    """Combinatorial weight of a data distribution over the components of y.

    "literal" evaluates the printed formula
    Π_k d_A!/(d1ᵏ!·d2ᵏ!)^{m_k} · l_A!/(l1ᵏ!·l2ᵏ!·l3ᵏ!)^{m_k} · 1/m_k!
    exactly as written; "unit" keeps only the symmetry factor Π 1/m_k!.
    The two disagree on worked examples, which is why both are exposed.
    """
    if mode not in ("literal", "unit"):
        raise DecompositionError(f"unknown per mode {mode!r}")
    if len(assignment_counts) != len(y.pairs):
        raise DecompositionError("assignment_counts must align with the pairs of y")
    d_A = d_of(M, A)
    if d_A.denominator != 1:
        raise DecompositionError("d_A is not integral")
    d_A = int(d_A)
    l_A = l_of(M, V, A)
    if sum(d1 + d2 for d1, d2, _, _, _ in assignment_counts) != d_A:
        raise DecompositionError("absolute data counts do not sum to d_A")
    if sum(l1 + l2 + l3 for _, _, l1, l2, l3 in assignment_counts) != l_A:
        raise DecompositionError("relative data counts do not sum to l_A")
    result = Fraction(1)
    for (c, m), (d1, d2, l1, l2, l3) in zip(y.pairs, assignment_counts):
        result *= Fraction(1, _fact(m))
        if mode == "literal":
            result *= Fraction(_fact(d_A), (_fact(d1) * _fact(d2)) ** m)
            result *= Fraction(_fact(l_A), (_fact(l1) * _fact(l2) * _fact(l3)) ** m)
    return result


@dataclass
class InvariantTable:
    """User-supplied connected counts Ru and torus counts Qu.

    ru keys are (class, data class) with the data class's curve orders
    stored sorted; qu keys are (primitive toroidal class, n).
    """

    ru_entries: dict[tuple[LatticeClass, DataClass], int] = field(default_factory=dict)
    qu_entries: dict[tuple[LatticeClass, int], int] = field(default_factory=dict)

    @property
    def support(self) -> list[LatticeClass]:
        seen: dict[tuple[int, ...], LatticeClass] = {}
        for c, _ in self.ru_entries:
            seen[c.coords] = c
        for c, _ in self.qu_entries:
            seen[c.coords] = c
        return [seen[k] for k in sorted(seen)]

    def validate(self, M: ManifoldModel, V: HypersurfaceModel) -> None:
        for (c, dc) in self.ru_entries:
            report = proper_counts(d_of(M, c), l_of(M, V, c), dc)
            if not report:
                raise DecompositionError(
                    f"ru table entry for class {list(c.coords)} has improper data: "
                    + "; ".join(report.failures)
                )
        for (c, n) in self.qu_entries:
            if not is_toroidal(M, c) or divisibility(c) != 1:
                raise DecompositionError(
                    f"qu table key {list(c.coords)} is not a primitive toroidal class"
                )
            if n < 1:
                raise DecompositionError("qu table key n must be >= 1")


def _canonical_dataclass(d1: int, d2: int, l1, l2, l3) -> DataClass:
    # slot-level data classes use sorted curve orders so table lookups are
    # insensitive to the enumeration order of the split
    return DataClass(d1=d1, d2=d2, l1=tuple(sorted(l1)), l2=tuple(sorted(l2)), l3=tuple(sorted(l3)))


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class _Slot:
    cls: LatticeClass
    group: int  # index into y.pairs
    kind: str  # "ru" or "qu"
    qu_key: tuple[LatticeClass, int] | None = None


def _build_slots(M: ManifoldModel, y: Decomposition) -> list[_Slot]:
    slots: list[_Slot] = []
    for k, (c, m) in enumerate(y.pairs):
        in_tau = square(M.lattice, c) != 0 or pairing(M.lattice, M.K, c) != 0
        if in_tau:
            for _ in range(m):
                slots.append(_Slot(cls=c, group=k, kind="ru"))
        else:
            if divisibility(c) != 1:
                raise DecompositionError(
                    f"qu entry requested for non-primitive class {list(c.coords)}"
                )
            slots.append(_Slot(cls=m * c, group=k, kind="qu", qu_key=(c, m)))
    return slots


def gt_from_ru(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    data_class: DataClass,
    table: InvariantTable,
    mode: str = "unit",
    max_multiplicity: int = 64,
) -> Fraction:
    """Assemble the disconnected invariant from connected and torus counts.

    Sums over decompositions of A drawn from the table's support; the data
    class is distributed over the component slots in every way that leaves
    each slot proper.  Modes:

    - "unit": weight Π 1/m_k! over the counted components only.
    - "literal": additionally the printed multinomial factors per slot.
    - "direct": per-configuration sum with the curve-order permutation
      sign; curve constraints are assigned element-wise (their positions
      are distinguishable and signed), point constraints by multinomial
      count, free contacts as multisets.  Table values are read as
      per-curve signs.

    Missing table entries contribute 0.
    """
    if mode not in ("unit", "literal", "direct"):
        raise DecompositionError(f"unknown mode {mode!r}")
    table.validate(M, V)
    d_A = d_of(M, A)
    l_A = l_of(M, V, A)
    total = Fraction(0)

    for y in enumerate_S(M, A, table.support, max_multiplicity=max_multiplicity):
        slots = _build_slots(M, y)
        n = len(slots)
        sym = Fraction(1)
        for k, (c, m) in enumerate(y.pairs):
            if any(s.group == k and s.kind == "ru" for s in slots):
                sym *= Fraction(1, _fact(m))

        slot_d = [d_of(M, s.cls) for s in slots]
        slot_l = [l_of(M, V, s.cls) for s in slots]

        if mode in ("unit", "literal"):
            total += sym * _sum_class_level(
                M, V, y, slots, slot_d, slot_l, data_class, table, mode, d_A, l_A
            )
        else:
            total += sym * _sum_direct(
                M, V, slots, slot_d, slot_l, data_class, table
            )
    return total


def _slot_values(
    slots: Sequence[_Slot],
    slot_classes: Sequence[DataClass],
    table: InvariantTable,
) -> Fraction | None:
    value = Fraction(1)
    for s, dc in zip(slots, slot_classes):
        if s.kind == "ru":
            v = table.ru_entries.get((s.cls, dc))
        else:
            v = table.qu_entries.get(s.qu_key)
        if v is None or v == 0:
            return None
        value *= v
    return value


def _iter_splits(data_class: DataClass, n: int):
    for d1_split in _compositions(data_class.d1, n):
        for d2_split in _compositions(data_class.d2, n):
            for l1_split in multiset_splits(data_class.l1, n):
                for l2_split in multiset_splits(data_class.l2, n):
                    for l3_split in multiset_splits(data_class.l3, n):
                        yield d1_split, d2_split, l1_split, l2_split, l3_split


def _sum_class_level(
    M, V, y, slots, slot_d, slot_l, data_class, table, mode, d_A, l_A
) -> Fraction:
    if d_A.denominator != 1:
        return Fraction(0)
    d_A = int(d_A)
    n = len(slots)
    acc = Fraction(0)
    for d1s, d2s, l1s, l2s, l3s in _iter_splits(data_class, n):
        slot_classes = []
        ok = True
        for i in range(n):
            dc = _canonical_dataclass(d1s[i], d2s[i], l1s[i], l2s[i], l3s[i])
            if not proper_counts(slot_d[i], slot_l[i], dc):
                ok = False
                break
            slot_classes.append(dc)
        if not ok:
            continue
        value = _slot_values(slots, slot_classes, table)
        if value is None:
            continue
        weight = Fraction(1)
        if mode == "literal":
            for i in range(n):
                weight *= Fraction(
                    _fact(d_A), _fact(d1s[i]) * _fact(d2s[i])
                ) * Fraction(
                    _fact(l_A),
                    _fact(len(l1s[i])) * _fact(len(l2s[i])) * _fact(len(l3s[i])),
                )
        acc += weight * value
    return acc


def _sum_direct(M, V, slots, slot_d, slot_l, data_class, table) -> Fraction:
    """Configuration-level sum q(h) = p(h)·Π r over slot assignments."""
    n = len(slots)
    acc = Fraction(0)
    d2_positions = list(range(data_class.d2))
    l2_orders = list(data_class.l2)
    for d1s in _compositions(data_class.d1, n):
        d1_ways = Fraction(_fact(data_class.d1))
        for c in d1s:
            d1_ways /= _fact(c)
        for l1s in multiset_splits(data_class.l1, n):
            # distinct points on V: count distributions refining the multiset split
            l1_ways = 1
            for d2_assign in itertools.product(range(n), repeat=len(d2_positions)):
                for l2_assign in itertools.product(range(n), repeat=len(l2_orders)):
                    sign = _assignment_sign(d2_assign) * _assignment_sign(l2_assign)
                    for l3s in multiset_splits(data_class.l3, n):
                        slot_classes = []
                        ok = True
                        for i in range(n):
                            dc = _canonical_dataclass(
                                d1s[i],
                                sum(1 for a in d2_assign if a == i),
                                l1s[i],
                                [s for s, a in zip(l2_orders, l2_assign) if a == i],
                                l3s[i],
                            )
                            if not proper_counts(slot_d[i], slot_l[i], dc):
                                ok = False
                                break
                            slot_classes.append(dc)
                        if not ok:
                            continue
                        value = _slot_values(slots, slot_classes, table)
                        if value is None:
                            continue
                        acc += sign * d1_ways * l1_ways * value
    return acc


def _assignment_sign(assign: Sequence[int]) -> int:
    """Sign of the permutation that groups positions into slot blocks."""
    concat = []
    for slot in range(max(assign, default=-1) + 1):
        concat.extend(i for i in range(len(assign)) if assign[i] == slot)
    return _permutation_sign(concat)


@dataclass
class ConvReport:
    lhs: int  # 2 d_A
    rhs: int  # 2 d_V [if m >= 1] + 2 Σ d_{A_i}
    holds: bool
    equality: bool
    bullets: dict[str, bool]

    def __bool__(self) -> bool:
        return self.holds


def conv_inequality_check(
    M: ManifoldModel,
    V: HypersurfaceModel,
    m: int,
    B_list: Sequence[tuple[LatticeClass, int]],
    A_list: Sequence[tuple[LatticeClass, int]],
) -> ConvReport:
    """Exact check of the compactness estimate 2d_A >= 2d_V + 2Σ d_{A_i}.

    A = mV + Σ m_iB_i + Σ r_iA_i.  Hypotheses (each named on failure):
    B_i² = -1 with genus 0, d_{A_i} >= 0, A_i² >= 0, d_V >= 0, V² >= 0,
    nonnegative pairwise intersections among the V/A_i classes, and
    A·B_i >= 0.  The d_V term is present only when m >= 1 (the m = 0
    decomposition has no hypersurface component).  On equality the report
    lists which rigidity conditions hold.
    """
    L = M.lattice
    if m < 0:
        raise DecompositionError("hypothesis failed: m must be non-negative")
    for c, mult in list(B_list) + list(A_list):
        if mult < 1:
            raise DecompositionError("hypothesis failed: multiplicities must be >= 1")
    for c, _ in B_list:
        if square(L, c) != -1:
            raise DecompositionError(
                f"hypothesis failed: B component {list(c.coords)} has square != -1"
            )
        if genus_of(M, c) != 0:
            raise DecompositionError(
                f"hypothesis failed: B component {list(c.coords)} has genus != 0"
            )
    for c, _ in A_list:
        if square(L, c) < 0:
            raise DecompositionError(
                f"hypothesis failed: A component {list(c.coords)} has negative square"
            )
        if d_of(M, c) < 0:
            raise DecompositionError(
                f"hypothesis failed: A component {list(c.coords)} has d < 0"
            )
    dv = d_of(M, V.v_class)
    if dv < 0:
        raise DecompositionError("hypothesis failed: hypersurface is not stable")
    if square(L, V.v_class) < 0:
        raise DecompositionError("hypothesis failed: V² < 0")
    pos_classes = [c for c, _ in A_list] + ([V.v_class] if m > 0 else [])
    for c1, c2 in itertools.combinations(pos_classes, 2):
        if pairing(L, c1, c2) < 0:
            raise DecompositionError(
                "hypothesis failed: negative intersection among non-negative components"
            )

    A = LatticeClass((0,) * L.rank)
    A = A + m * V.v_class
    for c, mult in B_list:
        A = A + mult * c
    for c, mult in A_list:
        A = A + mult * c
    for c, _ in B_list:
        if pairing(L, A, c) < 0:
            raise DecompositionError(
                f"hypothesis failed: A·B < 0 for B = {list(c.coords)}"
            )

    two_da = 2 * d_of(M, A)
    assert two_da.denominator == 1
    lhs = int(two_da)
    rhs_frac = 2 * sum((d_of(M, c) * 1 for c, _ in A_list), Fraction(0))
    if m >= 1:
        rhs_frac += 2 * dv
    assert rhs_frac.denominator == 1
    rhs = int(rhs_frac)
    holds = lhs >= rhs
    equality = lhs == rhs

    bullets = {}
    if equality:
        bullets["no_negative_components"] = not B_list
        ortho = all(
            pairing(L, c1, c2) == 0
            for (c1, _), (c2, _) in itertools.combinations(A_list, 2)
        )
        v_ortho = m == 0 or all(
            pairing(L, c, V.v_class) == 0 for c, _ in A_list
        )
        bullets["components_orthogonal"] = ortho and v_ortho
        bullets["hypersurface_simple"] = (
            m <= 1 or (dv == 0 and square(L, V.v_class) == 0)
        )
        bullets["covers_rigid_or_toroidal"] = all(
            r == 1 or (d_of(M, c) == 0 and square(L, c) == 0) for c, r in A_list
        )
    return ConvReport(lhs=lhs, rhs=rhs, holds=holds, equality=equality, bullets=bullets)


@dataclass
class DaiReport:
    lhs: int  # 2 Σ d_{A_i}
    mid: int  # Σ (2d1 + d2 - l2 - 2l3 + 2 l_{A_i})
    rhs: int  # 2 d_A
    ok: bool
    strict: bool

    def __bool__(self) -> bool:
        return self.ok


def dai_sum_bound_check(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    components: Sequence[tuple[LatticeClass, InitialData]],
) -> DaiReport:
    """Check the summed dimension estimate 2Σd_{A_i} >= Σ(2d1+d2-l2-2l3+2l_{A_i}) >= 2d_A."""
    if not components:
        raise DecompositionError("at least one component required")
    sum_l = 0
    mid = 0
    lhs_frac = Fraction(0)
    for c, I in components:
        dc = I.data_class()
        d_i = d_of(M, c)
        l_i = l_of(M, V, c)
        count_expr = 2 * dc.d1 + dc.d2 - len(dc.l2) - 2 * len(dc.l3)
        if count_expr > 2 * (d_i - l_i):
            raise DecompositionError(
                f"component {list(c.coords)} violates its dimension estimate"
            )
        sum_l += l_i
        mid += count_expr + 2 * l_i
        lhs_frac += 2 * d_i
    l_A = l_of(M, V, A)
    if sum_l < l_A:
        raise DecompositionError("sum of component contact numbers is below A·V")
    two_da = 2 * d_of(M, A)
    if lhs_frac.denominator != 1 or two_da.denominator != 1:
        raise DecompositionError("non-integral dimension counts")
    lhs = int(lhs_frac)
    rhs = int(two_da)
    ok = lhs >= mid >= rhs
    return DaiReport(lhs=lhs, mid=mid, rhs=rhs, ok=ok, strict=lhs > rhs)


def qu_partitions(n: int) -> list[tuple[tuple[int, int], ...]]:
    """All multisets of pairs (q, m), q, m >= 1, with Σ q·m = n.

    These index the configurations entering the torus count for nT: each
    pair is a degree-q cover taken with multiplicity m, and equal pairs may
    repeat (distinct tori of the same class).
    """
    if n < 1:
        raise DecompositionError("n must be >= 1")
    all_pairs = [
        (q, m) for q in range(1, n + 1) for m in range(1, n + 1) if q * m <= n
    ]
    results: list[tuple[tuple[int, int], ...]] = []
    current: list[tuple[int, int]] = []

    def rec(start: int, remaining: int) -> None:
        if remaining == 0:
            results.append(tuple(current))
            return
        for i in range(start, len(all_pairs)):
            q, m = all_pairs[i]
            if q * m > remaining:
                continue
            current.append((q, m))
            rec(i, remaining - q * m)
            current.pop()

    rec(0, n)
    return sorted(results)
