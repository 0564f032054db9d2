import numpy as np
import pytest
from hypothesis import given, strategies as st

from rankrev import Objective, build_matrix, replace_alternative, sub_matrix
from rankrev.errors import (
    DimensionMismatch,
    DuplicateName,
    NonFiniteValue,
    NonPositiveWeight,
    UnknownAlternative,
)


def test_build_preserves_layout(m1):
    assert m1.alternatives == ("A", "B", "C")
    assert m1.criteria == ("c1", "c2")
    assert m1.values.tolist() == [[10, 10], [8, 9], [5, 4]]
    assert m1.objectives == (Objective.MAX, Objective.MAX)
    assert m1.weights.tolist() == [0.6, 0.4]


@pytest.mark.parametrize(
    "kwargs, error",
    [
        (dict(alternatives=["A", "A"]), DuplicateName),
        (dict(criteria=["c1", "c1"]), DuplicateName),
        (dict(weights=[0.6, 0.0]), NonPositiveWeight),
        (dict(weights=[0.6, -1.0]), NonPositiveWeight),
        (dict(values=[[1, 2], [3, float("nan")]]), NonFiniteValue),
        (dict(values=[[1, 2], [3, float("inf")]]), NonFiniteValue),
        (dict(values=[[1, 2, 3], [4, 5, 6]]), DimensionMismatch),
        (dict(objectives=["max"]), DimensionMismatch),
        (dict(weights=[1.0]), DimensionMismatch),
        (dict(alternatives=[]), DimensionMismatch),
        (dict(alternatives=["A", ""]), DimensionMismatch),
    ],
)
def test_build_rejects(kwargs, error):
    base = dict(
        alternatives=["A", "B"],
        criteria=["c1", "c2"],
        values=[[1, 2], [3, 4]],
        objectives=["max", "min"],
        weights=[0.6, 0.4],
    )
    base.update(kwargs)
    with pytest.raises(error):
        build_matrix(**base)


def test_matrix_is_read_only(m1):
    with pytest.raises(ValueError):
        m1.values[0, 0] = 99.0


def test_sub_matrix_keeps_row_order(m1):
    sub = sub_matrix(m1, {"C", "A"})
    assert sub.alternatives == ("A", "C")
    assert sub.values.tolist() == [[10, 10], [5, 4]]
    assert sub.criteria == m1.criteria
    assert sub.weights.tolist() == m1.weights.tolist()


def test_sub_matrix_identity(m1):
    assert sub_matrix(m1, {"A", "B", "C"}) == m1


def test_sub_matrix_unknown(m1):
    with pytest.raises(UnknownAlternative):
        sub_matrix(m1, {"X"})


def test_replace_alternative(m1):
    out = replace_alternative(m1, "B", [7.5, 8.0])
    assert out.row("B").tolist() == [7.5, 8.0]
    assert out.row("A").tolist() == m1.row("A").tolist()
    assert out.row("C").tolist() == m1.row("C").tolist()
    # source untouched
    assert m1.row("B").tolist() == [8, 9]


def test_replace_with_same_row_is_identity(m1):
    assert replace_alternative(m1, "B", [8, 9]) == m1


def test_replace_errors(m1):
    with pytest.raises(UnknownAlternative):
        replace_alternative(m1, "Z", [1, 1])
    with pytest.raises(NonFiniteValue):
        replace_alternative(m1, "B", [1, float("nan")])


names = st.lists(st.sampled_from("ABCDEFG"), min_size=1, max_size=7, unique=True)


@given(keep=names)
def test_sub_matrix_properties(keep):
    dm = build_matrix(list("ABCDEFG"), ["c"], [[i] for i in range(7)], ["max"], [1])
    once = sub_matrix(dm, keep)
    assert sub_matrix(once, keep) == once
    positions = [dm.alternatives.index(a) for a in once.alternatives]
    assert positions == sorted(positions)


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=2))
def test_replace_roundtrip(row):
    dm = build_matrix(["A", "B"], ["x", "y"], [[1, 2], [3, 4]], ["max", "min"], [1, 1])
    changed = replace_alternative(dm, "A", row)
    assert replace_alternative(changed, "A", [1, 2]) == dm
    assert np.array_equal(changed.row("B"), dm.row("B"))
