"""Per-class numerical invariants and predicates on a homological 4-manifold model.

The manifold is modelled declaratively by its intersection lattice, a
canonical class K and the first Betti number; the hypersurface by its
class and genus, checked against adjunction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .lattice import IntegralLattice, LatticeClass, LatticeError, pairing


class ClassError(ValueError):
    """Invalid class-level input (adjunction violation, wrong hypotheses)."""


@dataclass(frozen=True)
class ManifoldModel:
    lattice: IntegralLattice
    K: LatticeClass
    b1: int = 0
    name: str = ""
    flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        self.lattice.check_member(self.K, "canonical class K")
        if self.b1 < 0:
            raise ClassError("b1 must be non-negative")
        object.__setattr__(self, "flags", frozenset(self.flags))

    def has_flag(self, flag: str) -> bool:
        return flag in self.flags


@dataclass(frozen=True)
class HypersurfaceModel:
    v_class: LatticeClass
    genus: int

    @staticmethod
    def create(M: ManifoldModel, v_class: LatticeClass, genus: int) -> "HypersurfaceModel":
        """Construct with the adjunction consistency check 2g-2 = V²+K·V."""
        M.lattice.check_member(v_class, "hypersurface class")
        if genus < 0:
            raise ClassError("genus must be non-negative")
        vv = pairing(M.lattice, v_class, v_class)
        kv = pairing(M.lattice, M.K, v_class)
        if 2 * genus - 2 != vv + kv:
            raise ClassError(
                f"hypersurface violates adjunction: 2g-2 = {2 * genus - 2} "
                f"but V²+K·V = {vv + kv}"
            )
        return HypersurfaceModel(v_class, genus)


def d_of(M: ManifoldModel, A: LatticeClass) -> Fraction:
    """The dimension count (A² - K·A)/2, as an exact rational."""
    aa = pairing(M.lattice, A, A)
    ka = pairing(M.lattice, M.K, A)
    return Fraction(aa - ka, 2)


def l_of(M: ManifoldModel, V: HypersurfaceModel, A: LatticeClass) -> int:
    """The total contact order A·V with the hypersurface class."""
    return pairing(M.lattice, A, V.v_class)


def genus_of(M: ManifoldModel, A: LatticeClass) -> int:
    """Adjunction genus g = 1 + (A² + K·A)/2 of an embedded representative."""
    aa = pairing(M.lattice, A, A)
    ka = pairing(M.lattice, M.K, A)
    if (aa + ka) % 2 != 0:
        raise ClassError("class violates evenness of adjunction")
    return 1 + (aa + ka) // 2


def is_toroidal(M: ManifoldModel, A: LatticeClass) -> bool:
    """A² = 0 and K·A = 0."""
    return (
        pairing(M.lattice, A, A) == 0 and pairing(M.lattice, M.K, A) == 0
    )


def divisibility(A: LatticeClass) -> int:
    """gcd of the coordinates (0 for the zero class)."""
    g = 0
    for c in A.coords:
        g = gcd(g, abs(c))
    return g


def is_multiply_toroidal(M: ManifoldModel, A: LatticeClass) -> bool:
    """Toroidal and divisible A = kA' with k > 1."""
    return is_toroidal(M, A) and divisibility(A) > 1


def is_stable(M: ManifoldModel, V: HypersurfaceModel) -> bool:
    """d_V >= 0; rules out limit components descending into V generically."""
    return d_of(M, V.v_class) >= 0


def is_small(M: ManifoldModel, V: HypersurfaceModel, A: LatticeClass) -> bool:
    """g(V) > g(A), the constraint used for non-stable hypersurfaces."""
    return V.genus > genus_of(M, A)


def is_exceptional(M: ManifoldModel, A: LatticeClass) -> bool:
    """Class of an exceptional sphere: A² = -1, K·A = -1 (so g = 0, d = 0)."""
    return (
        pairing(M.lattice, A, A) == -1
        and pairing(M.lattice, M.K, A) == -1
    )


def negative_class_admits_curve(M: ManifoldModel, B: LatticeClass) -> bool:
    """Whether a negative-square class can carry an embedded irreducible curve.

    For B² < 0 a generic embedded irreducible representative exists only
    when d_B >= 0, B² = -1 and g(B) = 0.
    """
    bb = pairing(M.lattice, B, B)
    if bb >= 0:
        raise ClassError("not a negative class")
    if d_of(M, B) < 0:
        return False
    return bb == -1 and genus_of(M, B) == 0


def level_index(
    M: ManifoldModel, V: HypersurfaceModel, A: LatticeClass, m: int
) -> int:
    """Index d_A - m of a limit configuration with m+1 levels."""
    if m < 0:
        raise ClassError("level count must be non-negative")
    d = d_of(M, A)
    if d.denominator != 1:
        raise ClassError("d_A is not integral")
    return int(d) - m


def stratum_dimension(M: ManifoldModel, V: HypersurfaceModel, m: int) -> int:
    """Dimension of the stratum of curves with m+1 levels: -m, or -m+|d_V|."""
    if m < 1:
        raise ClassError("m must be positive")
    dv = d_of(M, V.v_class)
    if dv >= 0:
        return -m
    return -m + int(abs(dv))


def area_deformation_witness(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    omega: Sequence[Fraction],
) -> tuple[Fraction, Fraction]:
    """Smallest (t, s) on the grid t=1, s=0,1,2,... with (tω+sA)·V > (tω+sA)·A.

    Requires A·V > A² >= 0 and positive ω-areas of A and V; the gap in the
    s-coefficient is A·V - A² > 0, so a witness always exists.
    """
    L = M.lattice
    if len(omega) != L.rank:
        raise LatticeError("omega has wrong length")
    omega = [Fraction(x) for x in omega]
    av = l_of(M, V, A)
    aa = pairing(L, A, A)
    if not (av > aa >= 0):
        raise ClassError("hypotheses of area lemma not met: need A·V > A² >= 0")

    def pair_with_omega(c: LatticeClass) -> Fraction:
        total = Fraction(0)
        for i, wi in enumerate(omega):
            if wi == 0:
                continue
            total += wi * sum(L.gram[i][j] * cj for j, cj in enumerate(c.coords))
        return total

    wa = pair_with_omega(A)
    wv = pair_with_omega(V.v_class)
    if not (wa > 0 and wv > 0):
        raise ClassError("hypotheses of area lemma not met: areas must be positive")

    t = Fraction(1)
    s = Fraction(0)
    while not (t * wv + s * av > t * wa + s * aa):
        s += 1
    assert t * wv + s * av > t * wa + s * aa
    return t, s
