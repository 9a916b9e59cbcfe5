"""K3 lattice theory: periods, Kahler chambers, Picard sublattices.

All checks are sign and orthogonality conditions over Q, so period points
carry rational coordinates.  The root search behind the chamber check is
reported with its height bound: the ambient root set is infinite, but the
candidates orthogonal to a valid period-plus-chamber triple live in a
negative definite sublattice and are enumerated exactly, then filtered by
the requested bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .intlinalg import integer_kernel, integer_rank
from .lattice import (
    IntegralLattice,
    LatticeClass,
    LatticeError,
    _diagonalize_symmetric,
    _enumerate_definite,
    direct_sum,
    e8_lattice,
    hyperbolic_plane,
    pairing,
)


class K3Error(ValueError):
    """Invalid K3-specific input."""


def build_k3_lattice() -> IntegralLattice:
    """The K3 intersection lattice 3H + 2(-E8): rank 22, signature (3, 19)."""
    blocks = [hyperbolic_plane((f"u{i}", f"v{i}")) for i in (1, 2, 3)]
    blocks.append(e8_lattice(negated=True, prefix="a"))
    blocks.append(e8_lattice(negated=True, prefix="b"))
    L = blocks[0]
    for b in blocks[1:]:
        L = direct_sum(L, b)
    return IntegralLattice(L.gram, L.basis_labels, unimodular=True)


Rational = Fraction | int
RationalVector = Sequence[Rational]


def _q(L: IntegralLattice, u: RationalVector, v: RationalVector) -> Fraction:
    if len(u) != L.rank or len(v) != L.rank:
        raise K3Error("vector length does not match the lattice rank")
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = L.gram[i]
        total += Fraction(ui) * sum(Fraction(row[j]) * Fraction(vj) for j, vj in enumerate(v) if vj)
    return total


@dataclass(frozen=True)
class PeriodPoint:
    """A rational point of the period domain, given by the plane span(re, im)."""

    re: tuple[Fraction, ...]
    im: tuple[Fraction, ...]

    def __init__(self, re: RationalVector, im: RationalVector):
        object.__setattr__(self, "re", tuple(Fraction(x) for x in re))
        object.__setattr__(self, "im", tuple(Fraction(x) for x in im))

    def validate(self, L: IntegralLattice) -> None:
        rr = _q(L, self.re, self.re)
        ii = _q(L, self.im, self.im)
        ri = _q(L, self.re, self.im)
        if rr != ii:
            raise K3Error(f"period point needs re·re = im·im, got {rr} != {ii}")
        if ri != 0:
            raise K3Error(f"period point needs re·im = 0, got {ri}")
        if rr + ii <= 0:
            raise K3Error("period point needs re·re + im·im > 0")


@dataclass(frozen=True)
class ChamberResult:
    status: str  # "pass", "fail", "inconclusive"
    bound: int
    witness: LatticeClass | None = None
    reason: str = ""

    def __str__(self) -> str:
        if self.status == "pass":
            return f"pass(bound={self.bound})"
        if self.status == "fail":
            if self.witness is not None:
                return f"fail(witness={list(self.witness.coords)})"
            return f"fail({self.reason})"
        return f"inconclusive({self.reason})"


def _clear_denominators(v: RationalVector) -> list[int]:
    fracs = [Fraction(x) for x in v]
    lcm = 1
    for f in fracs:
        d = f.denominator
        lcm = lcm * d // math.gcd(lcm, d)
    return [int(f * lcm) for f in fracs]


def kahler_chamber_check(
    kappa: RationalVector,
    U: PeriodPoint,
    height_bound: int,
    L: IntegralLattice | None = None,
) -> ChamberResult:
    """Search for a (-2)-class orthogonal to both the period plane and kappa.

    A valid chamber representative satisfies q(kappa, re) = q(kappa, im)
    = 0 and q(kappa, kappa) > 0.  Candidate roots then lie in the integer
    kernel of the three orthogonality conditions, a negative definite
    sublattice whose (-2)-vectors are finite and enumerated exactly; the
    result is filtered by the coordinate height bound, so "pass" is a
    bounded statement, not a proof.
    """
    if height_bound < 1:
        raise K3Error("height bound must be positive")
    if L is None:
        L = build_k3_lattice()
    U.validate(L)
    if _q(L, kappa, kappa) <= 0:
        return ChamberResult("fail", height_bound, reason="q(kappa, kappa) <= 0")
    if _q(L, kappa, U.re) != 0 or _q(L, kappa, U.im) != 0:
        return ChamberResult(
            "fail", height_bound, reason="kappa not orthogonal to the period plane"
        )

    rows = []
    for v in (U.re, U.im, list(kappa)):
        vi = _clear_denominators(v)
        rows.append([sum(L.gram[i][j] * vi[i] for i in range(L.rank)) for j in range(L.rank)])
    kernel = integer_kernel(rows)
    if not kernel:
        return ChamberResult("pass", height_bound)
    k = len(kernel)
    sub_gram = [
        [
            sum(
                kernel[a][i] * L.gram[i][j] * kernel[b][j]
                for i in range(L.rank)
                for j in range(L.rank)
            )
            for b in range(k)
        ]
        for a in range(k)
    ]
    neg = [[-x for x in row] for row in sub_gram]
    pos, _, zero = _diagonalize_symmetric(neg)
    if pos != k or zero != 0:
        return ChamberResult(
            "inconclusive",
            height_bound,
            reason="orthogonal complement is not negative definite",
        )
    for coeffs in _enumerate_definite(neg, 2):
        if all(c == 0 for c in coeffs):
            continue
        ambient = [
            sum(coeffs[a] * kernel[a][i] for a in range(k)) for i in range(L.rank)
        ]
        if max(abs(x) for x in ambient) <= height_bound:
            return ChamberResult(
                "fail", height_bound, witness=LatticeClass(tuple(ambient))
            )
    return ChamberResult("pass", height_bound)


def picard_signature_check(
    L: IntegralLattice, basis: Sequence[LatticeClass]
) -> tuple[bool, int, int]:
    """Signature test for a candidate Picard sublattice.

    Returns (ok, r, moduli_dim) with ok iff the restricted form has
    signature (1, r-1) and r <= 20; moduli_dim = 20 - r.
    """
    r = len(basis)
    if r == 0:
        raise K3Error("empty basis")
    for v in basis:
        L.check_member(v, "Picard basis vector")
    gram = [
        [int(pairing(L, a, b)) for b in basis] for a in basis
    ]
    pos, neg, zero = _diagonalize_symmetric([[Fraction(x) for x in row] for row in gram])
    if pos + neg < r:
        # degenerate restriction: either dependent vectors or an isotropic
        # direction; distinguish via the coordinate rank
        if integer_rank([list(v.coords) for v in basis]) < r:
            raise K3Error("basis vectors are linearly dependent")
    ok = pos == 1 and neg == r - 1 and zero == 0 and r <= 20
    return ok, r, 20 - r


@dataclass(frozen=True)
class PicCertificate:
    kind: str  # "kahler-class", "hyperkahler", "reflection", "none"
    side_condition: str = ""

    def __str__(self) -> str:
        if self.side_condition:
            return f"{self.kind} ({self.side_condition})"
        return self.kind


def pic_membership_certificate(L: IntegralLattice, A: LatticeClass) -> PicCertificate:
    """Which mechanism realizes A as the class of a divisor, by sign of A²."""
    L.check_member(A, "class")
    sq = pairing(L, A, A)
    if A.is_zero():
        return PicCertificate("none", "zero class")
    if sq > 0:
        return PicCertificate("kahler-class")
    if sq == 0:
        return PicCertificate(
            "hyperkahler", "requires some e with A·e > 0; unimodularity provides one"
        )
    if sq >= -2:
        return PicCertificate("reflection", "A or -A effective")
    return PicCertificate("none")
