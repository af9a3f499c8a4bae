import pytest

from modules.core import Coloring
from modules.cubes import OMEGA, CubeSpec, cube_stream, diagonal_tuples
from modules.errors import (
    EnumerationRepeatError,
    IndexOutOfRangeError,
    PartialColoringError,
    ProfileMissingError,
)
from modules.setsystem import SetSystem, SetTuple
from modules.stream import (
    COLORING_STRATEGIES,
    StreamHyperspace,
    acceptability_audit,
    certificate_bound,
    constant_coloring,
    first_occurrence_table,
    greedy_coloring,
    prefix_hyperspace,
    single_class_stream,
    stream_from_hyperspace,
)


@pytest.fixture
def plane():
    """N x N as the 2-cube stream, diagonal order"""
    return cube_stream(CubeSpec(SetTuple.singletons(2), (OMEGA, OMEGA)))


def test_diagonal_enumeration(plane):
    assert plane.prefix(6) == ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0))


def test_first_occurrence_rows(plane):
    table = first_occurrence_table(plane, 6)
    assert table.rows == ((0, 0), (1, 0), (0, 2), (3, 0), (1, 2), (0, 5))


def test_greedy_coloring(plane):
    assert greedy_coloring(plane, 6).assignment == (0, 0, 1, 0, 1, 1)


def test_greedy_coloring_with_rows_as_first_relation():
    # E_i = equal i-th coordinate, the reverse of the cube key: the colors swap
    stream = StreamHyperspace(
        n=2,
        source=lambda: diagonal_tuples((OMEGA, OMEGA)),
        class_key=lambda i, x: x[i],
        declared_profile=SetSystem.of(2, [{0, 1}]),
        profile_bounds={frozenset({0, 1}): 1},
    )
    assert greedy_coloring(stream, 2).assignment[1] == 1
    assert greedy_coloring(stream, 6).assignment == (0, 1, 0, 1, 0, 0)


def test_greedy_needs_total_profile():
    stream = StreamHyperspace(n=2, source=lambda: iter(range(10)), class_key=lambda i, x: x % 2)
    with pytest.raises(ProfileMissingError):
        greedy_coloring(stream, 5)


def test_repeat_detected():
    stream = StreamHyperspace(n=1, source=lambda: iter([1, 2, 1]), class_key=lambda i, x: x)
    with pytest.raises(EnumerationRepeatError):
        stream.enumerate(2)


def test_finite_stream_runs_out():
    stream = StreamHyperspace(n=1, source=lambda: iter([1, 2]), class_key=lambda i, x: x)
    with pytest.raises(IndexOutOfRangeError):
        stream.enumerate(2)


def test_greedy_audit_is_clean(plane):
    report = acceptability_audit(plane, greedy_coloring(plane, 300), 300)
    assert report.violations == ()
    assert all(e.count <= e.bound for e in report.counts)
    assert report.as_dict()["prefix_relative"] is False


def test_audit_threads_agree(plane):
    coloring = greedy_coloring(plane, 120)
    single = acceptability_audit(plane, coloring, 120, workers=1)
    fanned = acceptability_audit(plane, coloring, 120, workers=4)
    assert single.as_dict() == fanned.as_dict()


def test_single_class_profile_violation_reported_once():
    stream = single_class_stream(2, 5)
    report = acceptability_audit(stream, constant_coloring(stream, 10), 10)
    profile = report.violations_of("profile")
    assert len(profile) == 1
    assert profile[0]["size"] == 10
    assert profile[0]["bound"] == 5
    assert report.max_count == 10


def test_cube_certificate_counts_points_past_the_prefix(plane):
    # (1, 2) is not among the first six points, but both of its classes start there
    assert [certificate_bound(plane, k, 0, 6) for k in range(6)] == [1, 2, 4, 6, 6, 9]


def test_exact_bounds_dominate_the_prefix_bounds(plane):
    table = first_occurrence_table(plane, 200)
    for k in range(0, 200, 17):
        within = sum(1 for row in table.rows if max(row) <= k)
        assert certificate_bound(plane, k, 1, 200) >= within


def test_single_class_bound_is_prefix_relative():
    stream = single_class_stream(2, 5)
    assert acceptability_audit(stream, constant_coloring(stream, 10), 10).prefix_relative


def test_certificate_bound_on_single_class():
    stream = single_class_stream(2, 5)
    assert certificate_bound(stream, 0, 1, 10) == 10
    with pytest.raises(IndexOutOfRangeError):
        certificate_bound(stream, 10, 0, 10)


def test_equivalence_violations_reported():
    # |x - y| <= 1 is not transitive: 1 is related to both 0 and 2
    stream = StreamHyperspace(n=1, source=lambda: iter([0, 2, 1]), same_class=lambda i, x, y: abs(x - y) <= 1)
    report = acceptability_audit(stream, Coloring(1, (0, 0, 0)), 3)
    transitive = report.violations_of("equivalence")
    assert transitive and transitive[0]["axiom"] == "transitive"


def test_partial_coloring_rejected(plane):
    with pytest.raises(PartialColoringError):
        acceptability_audit(plane, Coloring(2, (0, 0)), 5)


@pytest.mark.parametrize("name", sorted(COLORING_STRATEGIES))
def test_every_strategy_piles_up_on_one_shared_class(name):
    stream = single_class_stream(2, 50)
    counts = []
    for length in (100, 1000):
        coloring = COLORING_STRATEGIES[name](stream, length)
        counts.append(acceptability_audit(stream, coloring, length).max_count)
    assert counts[0] >= 50
    assert counts[1] >= counts[0]


def test_prefix_hyperspace(plane):
    space = prefix_hyperspace(plane, 4)
    assert space.size == 4
    assert space.payloads == ((0, 0), (0, 1), (1, 0), (0, 2))
    assert space.same(1, 0, 1)


def test_finite_structure_as_stream(square):
    stream = stream_from_hyperspace(square)
    coloring = greedy_coloring(stream, 4)
    assert acceptability_audit(stream, coloring, 4).violations_of("certificate") == []


@pytest.mark.slow
def test_greedy_audit_at_scale(plane):
    report = acceptability_audit(plane, greedy_coloring(plane, 10_000), 10_000)
    assert report.violations_of("certificate") == []
    assert report.violations_of("profile") == []
