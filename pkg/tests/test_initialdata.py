import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relgt.initialdata import (
    DataClass,
    DataError,
    InitialData,
    dzero_characterization,
    is_proper,
    multiset_splits,
    partition_data,
    partition_parity_check,
    partition_sign,
    proper_counts,
    same_class,
    toroidal_contact_orders,
)


def test_dataclass_normalizes_unordered_parts():
    dc = DataClass(d1=1, d2=0, l1=(3, 1, 2), l2=(2, 1), l3=(2, 1))
    assert dc.l1 == (1, 2, 3)
    assert dc.l3 == (1, 2)
    assert dc.l2 == (2, 1)  # curve orders keep their order
    assert dc.contact_sum == 6 + 3 + 3


def test_dataclass_rejects_bad_values():
    with pytest.raises(DataError):
        DataClass(d1=-1, d2=0, l1=(), l2=(), l3=())
    with pytest.raises(DataError):
        DataClass(d1=0, d2=0, l1=(0,), l2=(), l3=())


def test_initialdata_rejects_duplicate_ids():
    with pytest.raises(DataError, match="duplicate"):
        InitialData(d1_points=("p", "p"))


def test_initialdata_to_class():
    I = InitialData(
        d1_points=("p",),
        d2_curves=("c1", "c2"),
        l1_pairs=(("a", 2),),
        l2_pairs=(("b", 1), ("c", 3)),
        l3_orders=(1, 1),
    )
    dc = I.data_class()
    assert (dc.d1, dc.d2) == (1, 2)
    assert dc.l1 == (2,)
    assert dc.l2 == (1, 3)
    assert dc.l3 == (1, 1)
    assert len(I.element_keys()) == 8


def test_proper_counts_negative_dimension():
    empty = DataClass(0, 0, (), (), ())
    assert proper_counts(Fraction(-1), 0, empty)
    report = proper_counts(Fraction(-1), 0, DataClass(1, 0, (), (), ()))
    assert not report
    assert "d_A < 0" in report.failures[0]


def test_proper_counts_clauses():
    # d_A = 2, l_A = 1: d1=1, d2=1, one l2 of order 1 balances
    dc = DataClass(1, 1, (), (1,), ())
    assert proper_counts(Fraction(2), 1, dc)
    # clause (i) violation
    bad = DataClass(3, 0, (), (), ())
    rep = proper_counts(Fraction(2), 0, bad)
    assert not rep and any("clause (i)" in f for f in rep.failures)
    # clause (iii) violation
    bad3 = DataClass(1, 1, (), (2,), ())
    rep3 = proper_counts(Fraction(2), 1, bad3)
    assert not rep3 and any("clause (iii)" in f for f in rep3.failures)


def test_is_proper_exceptional_class(M2, V2):
    E1 = M2.lattice.basis_class("E1")
    assert is_proper(M2, V2, E1, DataClass(0, 0, (), (), (1,)))
    assert not is_proper(M2, V2, E1, DataClass(0, 0, (), (), (2,)))
    assert not is_proper(M2, V2, E1, DataClass(1, 0, (), (), (1,)))


def test_dzero_characterization(M2, V2):
    E1 = M2.lattice.basis_class("E1")
    assert dzero_characterization(M2, V2, E1, DataClass(0, 0, (), (), (1,)))
    assert not dzero_characterization(M2, V2, E1, DataClass(0, 0, (1,), (), ()))
    h = M2.lattice.basis_class("h")
    with pytest.raises(DataError, match="d_A = 0"):
        dzero_characterization(M2, V2, h, DataClass(0, 0, (), (), ()))


def test_same_class_detects_gamma_reordering():
    I = InitialData(d2_curves=("c1", "c2"))
    J = InitialData(d2_curves=("c2", "c1"))
    assert same_class(I, I)
    assert not same_class(I, J)
    # unordered parts may be permuted freely
    A = InitialData(d1_points=("p", "q"), l1_pairs=(("a", 1), ("b", 2)))
    B = InitialData(d1_points=("q", "p"), l1_pairs=(("b", 2), ("a", 1)))
    assert same_class(A, B)


def test_toroidal_contact_orders():
    assert toroidal_contact_orders(3, 2) == [(1, 1, 1), (1, 1, 1)]
    assert toroidal_contact_orders(1, 0) == []
    with pytest.raises(DataError):
        toroidal_contact_orders(0, 1)


def test_partition_parity_check():
    assert partition_parity_check([(2, 0), (1, 1)])
    assert not partition_parity_check([(1, 0)])


def test_partition_sign_swap():
    I = InitialData(d2_curves=("c1", "c2"))
    same = partition_sign(I, {"c1": 0, "c2": 0}, [0])
    split = partition_sign(I, {"c1": 1, "c2": 0}, [0, 1])
    assert same == 1
    assert split == -1  # c2 before c1 is a transposition
    with pytest.raises(DataError, match="missing"):
        partition_sign(I, {"c1": 0}, [0])


def test_partition_sign_mixed_gamma():
    I = InitialData(d2_curves=("x", "y"), l2_pairs=(("a", 1), ("b", 1)))
    # sending y and b to component 0, x and a to 1, order [0, 1]:
    # both Gamma lists are reversed, signs multiply to +1
    sign = partition_sign(I, {"x": 1, "y": 0, "a": 1, "b": 0}, [0, 1])
    assert sign == 1


def test_partition_data_roundtrip():
    I = InitialData(
        d1_points=("p",),
        d2_curves=("c1", "c2"),
        l1_pairs=(("a", 2),),
        l2_pairs=(("b", 1),),
        l3_orders=(1, 2),
    )
    assignment = {
        ("d1", "p"): 0,
        ("d2", "c1"): 0,
        ("d2", "c2"): 1,
        ("l1", "a"): 1,
        ("l2", "b"): 0,
        ("l3", 0): 0,
        ("l3", 1): 1,
    }
    pieces = partition_data(I, 2, assignment)
    assert len(pieces) == 2
    assert pieces[0].d2_curves == ("c1",)
    assert pieces[1].l1_pairs == (("a", 2),)
    # union of the pieces reproduces the counts of I
    total = sum((p.data_class().contact_sum for p in pieces))
    assert total == I.data_class().contact_sum
    with pytest.raises(DataError, match="missing"):
        partition_data(I, 2, {})
    with pytest.raises(DataError, match="out of range"):
        partition_data(I, 1, assignment)


@given(
    st.lists(st.integers(min_value=1, max_value=3), max_size=5),
    st.integers(min_value=1, max_value=3),
)
@settings(max_examples=100, deadline=None)
def test_multiset_splits_partition_the_multiset(values, parts):
    splits = list(multiset_splits(values, parts))
    # each split recombines to the original multiset
    for split in splits:
        assert len(split) == parts
        merged = sorted(itertools.chain.from_iterable(split))
        assert merged == sorted(values)
    # splits are pairwise distinct
    assert len(set(splits)) == len(splits)


def test_multiset_splits_counts():
    # distinct values: every assignment is distinct, parts^n splits
    assert len(list(multiset_splits([1, 2, 3], 2))) == 8
    # identical values: multiset count C(n + parts - 1, parts - 1)
    assert len(list(multiset_splits([1, 1, 1], 2))) == 4
    assert list(multiset_splits([], 2)) == [((), ())]
