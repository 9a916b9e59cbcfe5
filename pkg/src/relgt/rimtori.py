"""Rim-tori rank computation and refined-invariant bookkeeping.

The rim-tori group is presented by a user-supplied integer matrix for the
composite map H1(V) -> H2(X - V); triangulating the complement is out of
scope, so the presentation is taken as given.  Ranks and torsion come
from the Smith normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .intlinalg import elementary_divisors, integer_rank
from .lattice import LatticeClass


class RimError(ValueError):
    """Invalid rim-tori presentation or refined-table input."""


@dataclass(frozen=True)
class RimPresentation:
    """The map i_* after the connecting map Delta, in chosen bases."""

    h1v_rank: int
    map_matrix: tuple[tuple[int, ...], ...]

    def __init__(self, h1v_rank: int, map_matrix: Sequence[Sequence[int]]):
        if h1v_rank < 0:
            raise RimError("h1v_rank must be non-negative")
        rows = tuple(tuple(int(x) for x in row) for row in map_matrix)
        for row in rows:
            if len(row) != h1v_rank:
                raise RimError(
                    f"map_matrix rows must have h1v_rank = {h1v_rank} columns"
                )
        object.__setattr__(self, "h1v_rank", h1v_rank)
        object.__setattr__(self, "map_matrix", rows)


@dataclass(frozen=True)
class RefinedKey:
    """A lift of (A, contact profile) by an element of the rim-tori group."""

    base_class: LatticeClass
    rim_element: tuple[int, ...]
    contact_profile: tuple[tuple[str, int], ...]

    def __init__(
        self,
        base_class: LatticeClass,
        rim_element: Sequence[int],
        contact_profile: Sequence[tuple[str, int]] = (),
    ):
        for _, s in contact_profile:
            if s < 1:
                raise RimError("contact orders must be >= 1")
        object.__setattr__(self, "base_class", base_class)
        object.__setattr__(self, "rim_element", tuple(int(x) for x in rim_element))
        object.__setattr__(
            self, "contact_profile", tuple(sorted(contact_profile))
        )


def rim_rank(p: RimPresentation) -> int:
    """Free rank of the image of the presentation matrix over Z."""
    if p.h1v_rank == 0 or not p.map_matrix:
        return 0
    return integer_rank([list(row) for row in p.map_matrix])


def rim_torsion(p: RimPresentation) -> list[int]:
    """Elementary divisors > 1 of the presentation matrix."""
    if p.h1v_rank == 0 or not p.map_matrix:
        return []
    return [d for d in elementary_divisors([list(row) for row in p.map_matrix]) if d > 1]


def enumerate_lifts(
    A: LatticeClass,
    contact_profile: Sequence[tuple[str, int]],
    rim_basis_rank: int,
    box_bound: int,
) -> list[RefinedKey]:
    """A finite window of the lift torsor: rim coordinates in a box.

    Lifts of (A, profile) form a torsor over the rim-tori group, which is
    infinite whenever its rank is positive; this enumerates the window
    [-box_bound, box_bound]^rank only.
    """
    if rim_basis_rank < 0:
        raise RimError("rim_basis_rank must be non-negative")
    if box_bound < 0:
        raise RimError("box_bound must be non-negative")
    window = range(-box_bound, box_bound + 1)
    return [
        RefinedKey(A, coords, tuple(contact_profile))
        for coords in itertools.product(window, repeat=rim_basis_rank)
    ]


def refined_sum_check(
    refined_table: Mapping[RefinedKey, int],
    base_table_value: int,
    A: LatticeClass,
) -> bool:
    """The refined counts over the lifts of A must resum to the base count."""
    for key in refined_table:
        if key.base_class.coords != A.coords:
            raise RimError(
                f"refined key with base class {list(key.base_class.coords)} "
                f"does not match {list(A.coords)}"
            )
    return sum(refined_table.values()) == base_table_value
