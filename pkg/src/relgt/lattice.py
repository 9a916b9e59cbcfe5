"""Exact arithmetic on finite-rank integral lattices with symmetric bilinear forms.

All Gram data is stored as Python integers and every computation
(determinants, signatures, vector enumeration) runs over exact rationals.
No floating point enters this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Raised for invalid lattice data or misuse of a lattice operation."""


class DimensionMismatch(LatticeError):
    """Raised when a class vector does not match the ambient lattice rank."""


@dataclass(frozen=True)
class LatticeClass:
    """An element of a lattice, as an integer coordinate vector in its basis."""

    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __add__(self, other: "LatticeClass") -> "LatticeClass":
        if len(self) != len(other):
            raise DimensionMismatch("cannot add classes of different lengths")
        return LatticeClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "LatticeClass") -> "LatticeClass":
        if len(self) != len(other):
            raise DimensionMismatch("cannot subtract classes of different lengths")
        return LatticeClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "LatticeClass":
        return LatticeClass(-c for c in self.coords)

    def __rmul__(self, k: int) -> "LatticeClass":
        return LatticeClass(k * c for c in self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self) -> str:
        return f"LatticeClass({list(self.coords)!r})"


@dataclass(frozen=True)
class IntegralLattice:
    """A free abelian group of finite rank with a symmetric integer pairing."""

    rank: int
    gram: tuple[tuple[int, ...], ...]
    basis_labels: tuple[str, ...]
    unimodular: bool = field(default=False, compare=False)

    def __init__(
        self,
        gram: Sequence[Sequence[int]],
        basis_labels: Sequence[str] | None = None,
        unimodular: bool = False,
    ):
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        rank = len(rows)
        for row in rows:
            if len(row) != rank:
                raise LatticeError("gram matrix must be square")
        for i in range(rank):
            for j in range(rank):
                if rows[i][j] != rows[j][i]:
                    raise LatticeError(
                        f"gram matrix not symmetric at ({i},{j})"
                    )
        if basis_labels is None:
            labels = tuple(f"v{i}" for i in range(rank))
        else:
            labels = tuple(str(s) for s in basis_labels)
        if len(labels) != rank:
            raise LatticeError("basis_labels length must equal rank")
        if len(set(labels)) != rank:
            raise LatticeError("basis_labels must be distinct")
        if unimodular and rank > 0:
            d = _det_rational(rows)
            if abs(d) != 1:
                raise LatticeError(f"lattice flagged unimodular but |det| = {abs(d)}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "gram", rows)
        object.__setattr__(self, "basis_labels", labels)
        object.__setattr__(self, "unimodular", unimodular)

    def check_member(self, a: LatticeClass, name: str = "class") -> None:
        if len(a) != self.rank:
            raise DimensionMismatch(
                f"{name} has length {len(a)}, lattice rank is {self.rank}"
            )

    def class_from_labels(self, combo: dict[str, int]) -> LatticeClass:
        """Build a class from a {label: coefficient} mapping."""
        index = {lab: i for i, lab in enumerate(self.basis_labels)}
        coords = [0] * self.rank
        for lab, c in combo.items():
            if lab not in index:
                raise LatticeError(f"unknown basis label {lab!r}")
            coords[index[lab]] += int(c)
        return LatticeClass(coords)

    def basis_class(self, label: str) -> LatticeClass:
        return self.class_from_labels({label: 1})

    def det(self) -> int:
        d = _det_rational(self.gram)
        assert d.denominator == 1
        return d.numerator


def pairing(L: IntegralLattice, a: LatticeClass, b: LatticeClass) -> int:
    """The intersection pairing a·b = aᵀ G b, exact and symmetric."""
    L.check_member(a, "left operand")
    L.check_member(b, "right operand")
    total = 0
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        row = L.gram[i]
        total += ai * sum(row[j] * bj for j, bj in enumerate(b.coords) if bj)
    return total


def square(L: IntegralLattice, a: LatticeClass) -> int:
    return pairing(L, a, a)


def _det_rational(gram: Sequence[Sequence[int]]) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination over Q."""
    n = len(gram)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in gram]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f == 0:
                continue
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def _diagonalize_symmetric(gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Sylvester counts (positive, negative, zero) of a symmetric form.

    Symmetric congruence diagonalization over Q.  A zero diagonal with a
    nonzero off-diagonal entry is repaired by the standard row+column
    addition (valid in characteristic 0).
    """
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    pos = neg = zero = 0
    for k in range(n):
        if m[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if swap is not None:
                # congruent swap of basis vectors k and swap
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
                m[k], m[swap] = m[swap], m[k]
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                # e_k -> e_k + e_j turns the diagonal entry into 2*m[k][j]
                for row in m:
                    row[k] += row[j]
                for c in range(n):
                    m[k][c] += m[j][c]
        piv = m[k][k]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        # clear row k below the pivot, then the matching columns
        for r in range(k + 1, n):
            f = m[r][k] / piv
            if f == 0:
                continue
            for c in range(k, n):
                m[r][c] -= f * m[k][c]
        for c in range(k + 1, n):
            f = m[k][c] / piv
            if f == 0:
                continue
            for r in range(k + 1, n):
                m[r][c] -= f * m[r][k]
            m[k][c] = Fraction(0)
        for r in range(k + 1, n):
            m[r][k] = Fraction(0)
    return pos, neg, zero


def signature(L: IntegralLattice) -> tuple[int, int]:
    """Sylvester signature (positive index, negative index) of the form."""
    pos, neg, zero = _diagonalize_symmetric(L.gram)
    if zero:
        raise LatticeError("degenerate form")
    return pos, neg


def is_definite(L: IntegralLattice) -> int:
    """Return +1 / -1 for positive/negative definite, 0 otherwise."""
    if L.rank == 0:
        return 0
    pos, neg, zero = _diagonalize_symmetric(L.gram)
    if zero == 0 and neg == 0:
        return 1
    if zero == 0 and pos == 0:
        return -1
    return 0


def direct_sum(L1: IntegralLattice, L2: IntegralLattice) -> IntegralLattice:
    """Orthogonal direct sum: block-diagonal Gram, concatenated labels.

    Colliding labels from the right summand get a deterministic "#n" suffix.
    """
    n1, n2 = L1.rank, L2.rank
    gram = [[0] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            gram[i][j] = L1.gram[i][j]
    for i in range(n2):
        for j in range(n2):
            gram[n1 + i][n1 + j] = L2.gram[i][j]
    labels = list(L1.basis_labels)
    used = set(labels)
    for lab in L2.basis_labels:
        new = lab
        n = 1
        while new in used:
            new = f"{lab}#{n}"
            n += 1
        labels.append(new)
        used.add(new)
    return IntegralLattice(gram, labels, unimodular=L1.unimodular and L2.unimodular)


def blow_up(L: IntegralLattice, label: str | None = None) -> IntegralLattice:
    """Adjoin an orthogonal ⟨-1⟩ summand with a fresh exceptional label."""
    if label is None:
        k = 1
        while f"E{k}" in L.basis_labels:
            k += 1
        label = f"E{k}"
    minus_one = IntegralLattice([[-1]], [label], unimodular=True)
    return direct_sum(L, minus_one)


def _ldlt(gram: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """G = L D Lᵀ for positive definite G, L unit lower triangular, D > 0."""
    n = len(gram)
    lower = [[Fraction(0)] * n for _ in range(n)]
    diag = [Fraction(0)] * n
    for j in range(n):
        d = Fraction(gram[j][j]) - sum(
            diag[k] * lower[j][k] * lower[j][k] for k in range(j)
        )
        if d <= 0:
            raise LatticeError("form is not positive definite")
        diag[j] = d
        lower[j][j] = Fraction(1)
        for i in range(j + 1, n):
            v = Fraction(gram[i][j]) - sum(
                diag[k] * lower[i][k] * lower[j][k] for k in range(j)
            )
            lower[i][j] = v / d
    return lower, diag


def _enumerate_definite(
    gram: Sequence[Sequence[int]], target: int
) -> list[tuple[int, ...]]:
    """All integer vectors x with xᵀGx = target for positive definite G.

    Fincke-Pohst style recursion on the exact LDLᵀ decomposition: with
    Q(x) = Σ d_i (x_i + Σ_{j>i} L_{ji} x_j)², coordinates are chosen from
    the last index down and pruned against the remaining budget.
    """
    n = len(gram)
    if n == 0:
        return [()] if target == 0 else []
    if target == 0:
        return [(0,) * n]
    if target < 0:
        return []
    lower, diag = _ldlt(gram)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i: int, budget: Fraction) -> None:
        if i < 0:
            if budget == 0:
                out.append(tuple(x))
            return
        c = sum(lower[j][i] * x[j] for j in range(i + 1, n))
        # scan integers around floor(-c) while d_i (x_i + c)^2 <= budget;
        # the admissible set is a contiguous interval containing -c
        start = -c
        base = start.numerator // start.denominator
        xi = base
        while diag[i] * (xi + c) ** 2 <= budget:
            x[i] = xi
            rec(i - 1, budget - diag[i] * (xi + c) ** 2)
            xi -= 1
        xi = base + 1
        while diag[i] * (xi + c) ** 2 <= budget:
            x[i] = xi
            rec(i - 1, budget - diag[i] * (xi + c) ** 2)
            xi += 1
        x[i] = 0

    rec(n - 1, Fraction(target))
    return sorted(out)


def enumerate_square_classes(L: IntegralLattice, square_value: int) -> list[LatticeClass]:
    """Exhaustively list every v with v·v = square_value in a definite lattice.

    Refuses indefinite lattices: there the set is infinite in general and
    truncation would be silent; use bounded_square_classes instead.
    """
    sign = is_definite(L)
    if L.rank > 0 and sign == 0:
        raise LatticeError(
            "indefinite lattice: exhaustive enumeration impossible; "
            "use bounded_square_classes"
        )
    if square_value == 0:
        return [LatticeClass((0,) * L.rank)]
    if sign == 0 or sign * square_value < 0:
        # rank 0, or square of the wrong sign for the definiteness
        return []
    gram = L.gram if sign > 0 else tuple(
        tuple(-x for x in row) for row in L.gram
    )
    vecs = _enumerate_definite(gram, abs(square_value))
    return [LatticeClass(v) for v in vecs]


def _gram_components(L: IntegralLattice) -> list[list[int]]:
    """Indices grouped by connected components of the off-diagonal pattern."""
    seen = [False] * L.rank
    comps = []
    for start in range(L.rank):
        if seen[start]:
            continue
        stack = [start]
        comp = []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(L.rank):
                if j != i and not seen[j] and L.gram[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def bounded_square_classes(
    L: IntegralLattice, square_value: int, height_bound: int
) -> list[LatticeClass]:
    """All v with max|coord| <= height_bound and v·v = square_value.

    This is an explicitly incomplete window into an in general infinite
    set.  The search splits the Gram matrix into orthogonal blocks and
    combines per-block squares, so block-diagonal forms (e.g. direct
    sums) avoid the full coordinate box.
    """
    if height_bound < 0:
        raise LatticeError("height_bound must be non-negative")
    if L.rank == 0:
        return [LatticeClass(())] if square_value == 0 else []
    comps = _gram_components(L)
    rng = range(-height_bound, height_bound + 1)

    per_comp: list[dict[int, list[tuple[int, ...]]]] = []
    for comp in comps:
        sub = [[L.gram[i][j] for j in comp] for i in comp]
        table: dict[int, list[tuple[int, ...]]] = {}
        for v in itertools.product(rng, repeat=len(comp)):
            q = sum(
                v[i] * sub[i][j] * v[j] for i in range(len(comp)) for j in range(len(comp))
            )
            table.setdefault(q, []).append(v)
        per_comp.append(table)

    results: list[LatticeClass] = []

    def rec(idx: int, remaining: int, chosen: list[tuple[int, ...]]) -> None:
        if idx == len(comps):
            if remaining == 0:
                coords = [0] * L.rank
                for comp, v in zip(comps, chosen):
                    for pos, val in zip(comp, v):
                        coords[pos] = val
                results.append(LatticeClass(coords))
            return
        for q, vecs in per_comp[idx].items():
            if idx == len(comps) - 1 and q != remaining:
                continue
            for v in vecs:
                chosen.append(v)
                rec(idx + 1, remaining - q, chosen)
                chosen.pop()

    rec(0, square_value, [])
    return sorted(results, key=lambda c: c.coords)


# standard building blocks

def hyperbolic_plane(labels: tuple[str, str] = ("u", "v")) -> IntegralLattice:
    return IntegralLattice([[0, 1], [1, 0]], labels, unimodular=True)


E8_GRAM: tuple[tuple[int, ...], ...] = (
    # Cartan matrix of E8 in the Bourbaki simple-root ordering
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)


def e8_lattice(negated: bool = False, prefix: str = "a") -> IntegralLattice:
    gram = E8_GRAM if not negated else tuple(tuple(-x for x in r) for r in E8_GRAM)
    return IntegralLattice(gram, [f"{prefix}{i+1}" for i in range(8)], unimodular=True)
