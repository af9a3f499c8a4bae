import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.core import (
    Coloring,
    FiniteIndexedHyperspace,
    class_of,
    class_sizes,
    coloring_from_dict,
    coloring_to_dict,
    fine_to_depth,
    hyperspace_profile,
    intersection_over,
    intersection_profile,
    is_acceptable,
    is_grid_for,
    is_n_grid,
    load_hyperspace,
    restrict_to,
    save_hyperspace,
    total_intersection,
)
from modules.errors import (
    GroundSetMismatchError,
    IndexOutOfRangeError,
    MalformedInputError,
    PartialColoringError,
    SearchTooLargeError,
)
from modules.setsystem import ExtendedNat, SetSystem, depth


def test_labels_are_canonicalized():
    space = FiniteIndexedHyperspace(1, 3, ((5, 7, 5),))
    assert space.labels == ((0, 1, 0),)


def test_label_row_length_checked():
    with pytest.raises(MalformedInputError):
        FiniteIndexedHyperspace(2, 3, ((0, 0, 0), (0, 1)))


def test_classes(square):
    assert class_of(square, 0, 0) == frozenset([0, 1])
    assert class_of(square, 0, 1) == frozenset([0, 2])
    assert total_intersection(square, 3) == frozenset([3])
    assert intersection_over(square, 1, []) == frozenset(range(4))
    assert class_sizes(square, 2) == (2, 2)


def test_out_of_range(square):
    with pytest.raises(IndexOutOfRangeError):
        class_of(square, 4, 0)
    with pytest.raises(IndexError):
        class_of(square, 0, 2)


def test_grid_checks(square):
    assert is_n_grid(square, 1)
    assert is_grid_for(square, SetSystem.of(2, [[0, 1]]), 1)
    assert not is_grid_for(square, SetSystem.of(2, [[0]]), 1)
    assert is_grid_for(square, SetSystem.of(2, [[0]]), 2)


def test_grid_ground_mismatch(square):
    with pytest.raises(GroundSetMismatchError):
        is_grid_for(square, SetSystem(3), 1)


def test_profiles(square):
    assert intersection_profile(square, 0, 1).as_lists() == [[0, 1]]
    assert hyperspace_profile(square, 1).as_lists() == [[0, 1]]
    assert hyperspace_profile(square, 2).as_lists() == [[0], [1], [0, 1]]


def test_restrict_to(square):
    sub = restrict_to(square, [0, 3])
    assert sub.size == 2
    assert sub.labels == ((0, 1), (0, 1))
    with pytest.raises(MalformedInputError):
        restrict_to(square, [1, 1])


def test_acceptability_report(square):
    report = is_acceptable(square, Coloring(2, (0, 0, 0, 0)))
    assert report.acceptable
    assert report.max_count == 2
    assert report.witness == (0, 0)
    assert report.counts == ((2, 0),) * 4


def test_coloring_validation(square):
    with pytest.raises(PartialColoringError):
        Coloring(2, (0, 2))
    with pytest.raises(PartialColoringError):
        is_acceptable(square, Coloring(2, (0, 1)))


def test_json_files(square, tmp_path):
    path = tmp_path / "square.json"
    save_hyperspace(square, path)
    assert load_hyperspace(path) == square
    assert coloring_from_dict(coloring_to_dict(Coloring(2, (1, 0)))) == Coloring(2, (1, 0))


def test_bad_json(write_file):
    with pytest.raises(MalformedInputError):
        load_hyperspace(write_file("bad.json", '{"n": 2}'))
    with pytest.raises(MalformedInputError):
        load_hyperspace(write_file("broken.json", "{"))


@st.composite
def small_hyperspaces(draw):
    n = draw(st.integers(1, 3))
    size = draw(st.integers(0, 6))
    rows = draw(st.lists(st.lists(st.integers(0, 2), min_size=size, max_size=size), min_size=n, max_size=n))
    return FiniteIndexedHyperspace(n, size, tuple(tuple(r) for r in rows))


class TestFineToDepth:
    def test_square(self, square):
        assert fine_to_depth(square, 1, 1)
        assert not fine_to_depth(square, 1, 2)
        assert not fine_to_depth(square, 0, 1)
        assert fine_to_depth(square, 0, 0)
        assert fine_to_depth(square, 2, 5)

    def test_repeated_relation(self):
        # one relation repeated three times, a single class of four elements
        space = FiniteIndexedHyperspace(3, 4, ((0, 0, 0, 0),) * 3)
        assert not fine_to_depth(space, 3, 1)
        assert fine_to_depth(space, 4, 3)

    def test_empty_carrier_is_fine(self):
        assert fine_to_depth(FiniteIndexedHyperspace(2, 0, ((), ())), 0, 4)

    def test_bad_arguments(self, square):
        with pytest.raises(MalformedInputError):
            fine_to_depth(square, 1, -1)
        with pytest.raises(MalformedInputError):
            fine_to_depth(square, -1, 1)
        with pytest.raises(SearchTooLargeError):
            fine_to_depth(FiniteIndexedHyperspace(3, 1, ((0,), (0,), (0,))), 1, 1, max_ground=2)

    @settings(max_examples=150, deadline=None)
    @given(small_hyperspaces(), st.integers(0, 3), st.integers(0, 4))
    def test_agrees_with_profile_depths(self, space, bound, d):
        expected = all(ExtendedNat(d) < depth(intersection_profile(space, a, bound)) for a in range(space.size))
        assert fine_to_depth(space, bound, d) == expected
