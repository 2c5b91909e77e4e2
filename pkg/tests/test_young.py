import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isosar.young import (
    DiagramSet,
    YoungDiagram,
    add_box,
    count_stab,
    diagram,
    dim_unitary,
    dimension_record,
    enumerate_diagrams,
    log2_dim_unitary,
    remove_box,
)


@st.composite
def diagram_strategy(draw, max_d=4, max_n=12):
    d = draw(st.integers(min_value=1, max_value=max_d))
    n = draw(st.integers(min_value=0, max_value=max_n))
    ds = enumerate_diagrams(d, n)
    return ds.diagrams[draw(st.integers(min_value=0, max_value=len(ds) - 1))]


def rows_of(ds):
    return [a.rows for a in ds]


def test_enumerate_single_row():
    assert rows_of(enumerate_diagrams(1, 7)) == [(7,)]


def test_enumerate_two_rows_of_three():
    assert rows_of(enumerate_diagrams(2, 3)) == [(3, 0), (2, 1)]


def test_enumerate_three_rows_of_three():
    assert rows_of(enumerate_diagrams(3, 3)) == [(3, 0, 0), (2, 1, 0), (1, 1, 1)]


def test_enumerate_counts_match_partition_numbers():
    # partitions of n into at most d parts, spot values
    assert len(enumerate_diagrams(2, 10)) == 6
    assert len(enumerate_diagrams(3, 10)) == 14
    assert len(enumerate_diagrams(10, 10)) == 42  # p(10)


def test_empty_diagram_is_enumerable():
    ds = enumerate_diagrams(3, 0)
    assert rows_of(ds) == [(0, 0, 0)]
    assert count_stab(ds.diagrams[0]) == 1


def test_diagram_validation():
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))
    with pytest.raises(ValueError):
        YoungDiagram((2, -1))
    with pytest.raises(ValueError):
        diagram((1, 1, 1), d=2)


def test_add_box_examples():
    assert rows_of(add_box(diagram((1, 0)))) == [(2, 0), (1, 1)]
    assert rows_of(add_box(diagram((1, 1)))) == [(2, 1)]
    assert rows_of(add_box(diagram((5,)))) == [(6,)]


def test_remove_box_examples():
    assert rows_of(remove_box(diagram((2, 2)))) == [(2, 1)]
    assert rows_of(remove_box(diagram((2, 1)))) == [(2, 0), (1, 1)]
    assert rows_of(remove_box(diagram((1,)))) == [(0,)]


def test_dim_unitary_examples():
    assert dim_unitary(diagram((2, 1, 0)), 3) == 8
    for k in range(6):
        assert dim_unitary(diagram((k, 0)), 2) == k + 1
    assert dim_unitary(diagram((1, 1)), 2) == 1


def test_dim_unitary_rejects_too_many_rows():
    with pytest.raises(ValueError):
        dim_unitary(diagram((1, 1, 1)), 2)


def test_count_stab_examples():
    assert count_stab(diagram((4,))) == 1
    assert count_stab(diagram((2, 1))) == 2
    assert count_stab(diagram((3, 2))) == 5
    assert count_stab(diagram((4, 3, 2, 1))) == 768


def test_log2_dim_matches_exact():
    a = diagram((40, 30, 20, 10))
    assert abs(log2_dim_unitary(a, 6) - math.log2(dim_unitary(a, 6))) <= 1e-12


def test_dimension_record():
    rec = dimension_record(diagram((3, 2)), 4)
    assert rec.dim_unitary == dim_unitary(diagram((3, 2)), 4)
    assert rec.stab_count == 5
    assert abs(rec.log2_dim - math.log2(rec.dim_unitary)) <= 1e-12


def test_serialization_format():
    ds = enumerate_diagrams(2, 10)
    text = ds.serialize()
    lines = text.splitlines()
    assert lines[0] == "d=2 n=10 count=6"
    assert lines[1] == "10,0"
    assert lines[-1] == "5,5"
    # byte-identical across repeated enumeration
    assert text == enumerate_diagrams(2, 10).serialize()


def test_diagram_set_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        DiagramSet.from_diagrams(2, 3, [diagram((2, 1)), diagram((2, 2))])


@given(diagram_strategy())
@settings(max_examples=200)
def test_branching_consistency(alpha):
    for beta in add_box(alpha):
        assert alpha in remove_box(beta)
    if alpha.n >= 1:
        for beta in remove_box(alpha):
            assert alpha in add_box(beta)


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=12))
@settings(max_examples=60, deadline=None)
def test_schur_weyl_dimension_identity(d, n):
    total = sum(dim_unitary(a, d) * count_stab(a) for a in enumerate_diagrams(d, n))
    assert total == d**n


@given(diagram_strategy(), st.integers(min_value=4, max_value=8))
@settings(max_examples=100)
def test_dim_monotone_in_group_size(alpha, m):
    assert dim_unitary(alpha, m + 1) >= dim_unitary(alpha, m)


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=12))
@settings(max_examples=40, deadline=None)
def test_enumeration_is_sorted_and_complete(d, n):
    ds = enumerate_diagrams(d, n)
    rows = rows_of(ds)
    assert rows == sorted(rows, reverse=True)
    assert len(set(rows)) == len(rows)
    for a in ds:
        assert a.n == n and a.d == d
