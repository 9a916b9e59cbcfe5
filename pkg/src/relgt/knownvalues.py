"""Theorem-backed value rules that populate or override invariant tables.

Each rule either determines a count (0 or 1) from homological data plus
declarative manifold flags, or returns None to defer to the table.  The
flags ("rational_or_ruled", "k3", "algebraic_hypersurface") assert facts
the lattice model cannot verify; what can be checked (K = 0, signature)
is checked.
"""

from __future__ import annotations

import logging
from typing import Sequence

from .classes import (
    HypersurfaceModel,
    ManifoldModel,
    d_of,
    genus_of,
    is_exceptional,
    is_stable,
    is_toroidal,
    l_of,
)
from .decomp import InvariantTable
from .initialdata import DataClass
from .lattice import LatticeClass, pairing
from .lattice import signature as lattice_signature

logger = logging.getLogger(__name__)


class KnownValueError(ValueError):
    """Rule invoked outside its theorem hypotheses."""


def ru_genus0(
    M: ManifoldModel,
    V: HypersurfaceModel,
    A: LatticeClass,
    I: DataClass,
) -> int | None:
    """Connected genus-0 counts: only exceptional spheres contribute.

    For a single exceptional class E distinct from the hypersurface class
    the count is 1 exactly when the data is the canonical one (E·V free
    contacts of order 1); the hypersurface's own exceptional class gives
    0, as does any genus-0 class that is not exceptional.
    """
    if M.has_flag("rational_or_ruled"):
        raise KnownValueError("theorem hypotheses not met: manifold is rational or ruled")
    if genus_of(M, A) != 0:
        raise KnownValueError("theorem hypotheses not met: class has nonzero genus")
    if not is_stable(M, V):
        raise KnownValueError("theorem hypotheses not met: hypersurface not stable")
    if not is_exceptional(M, A):
        return 0
    if A.coords == V.v_class.coords:
        return 0
    ev = l_of(M, V, A)
    canonical = DataClass(d1=0, d2=0, l1=(), l2=(), l3=(1,) * ev)
    return 1 if I == canonical else 0


def ru_negative_dim(
    M: ManifoldModel, V: HypersurfaceModel, A: LatticeClass
) -> int | None:
    """0 when d_A < 0 and A is not the hypersurface class; else undetermined.

    The hypersurface class itself is excluded: a rigid V persists at
    negative formal dimension.
    """
    if d_of(M, A) < 0 and A.coords != V.v_class.coords:
        return 0
    return None


def _check_k3(M: ManifoldModel) -> None:
    if not M.has_flag("k3"):
        raise KnownValueError("manifold is not flagged as a K3 surface")
    if not M.K.is_zero():
        raise KnownValueError("K3 model must have K = 0")
    if M.b1 != 0:
        raise KnownValueError("K3 model must have b1 = 0")
    sig = lattice_signature(M.lattice)
    if sig != (3, 19):
        raise KnownValueError(f"K3 model must have signature (3, 19), got {sig}")


def k3_vanishing(
    M: ManifoldModel, V: HypersurfaceModel, A: LatticeClass
) -> int | None:
    """Vanishing on a K3 with an algebraic hypersurface of positive genus.

    The invariant vanishes unless A = nV; for n > 1 it also vanishes when
    V is not toroidal.  The surviving cases are left to the table.
    """
    _check_k3(M)
    if not M.has_flag("algebraic_hypersurface"):
        raise KnownValueError("hypersurface is not flagged deformation-algebraic")
    if V.genus < 1:
        raise KnownValueError("vanishing theorem needs g(V) >= 1")
    n = _multiple_of(A, V.v_class)
    if n is None or n < 1:
        return 0
    if n > 1 and not is_toroidal(M, V.v_class):
        return 0
    return None


def _multiple_of(A: LatticeClass, B: LatticeClass) -> int | None:
    """The integer n with A = nB, if one exists."""
    if B.is_zero():
        return None
    n = None
    for a, b in zip(A.coords, B.coords):
        if b == 0:
            if a != 0:
                return None
            continue
        if a % b != 0:
            return None
        q = a // b
        if n is None:
            n = q
        elif q != n:
            return None
    return n


def apply_rules(
    table: InvariantTable,
    M: ManifoldModel,
    V: HypersurfaceModel,
    queries: Sequence[tuple[LatticeClass, DataClass]],
) -> InvariantTable:
    """Fill ru entries from the rules; explicit entries take precedence.

    Rules whose hypotheses do not hold for the model simply do not fire.
    A conflict between a firing rule and an explicit entry keeps the
    explicit value and logs a warning.
    """
    for A, dc in queries:
        value = ru_negative_dim(M, V, A)
        if value is None:
            try:
                value = ru_genus0(M, V, A, dc)
            except (KnownValueError, ValueError):
                value = None
        if value is None:
            try:
                value = k3_vanishing(M, V, A)
            except KnownValueError:
                value = None
        if value is None:
            continue
        key = (A, dc)
        if key in table.ru_entries:
            if table.ru_entries[key] != value:
                logger.warning(
                    "explicit table entry %s for class %s kept over rule value %s",
                    table.ru_entries[key],
                    list(A.coords),
                    value,
                )
            continue
        table.ru_entries[key] = value
    return table
