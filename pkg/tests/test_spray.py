import csv
import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modules.errors import GeneralPositionError, MalformedInputError
from modules.spray import (
    SprayConfig,
    as_point,
    cover_with_sprays,
    general_position_check,
    max_count_growth,
    parse_centers,
    rational_grid,
    same_sphere,
    spray_stream,
    write_cover_csv,
)

TRIANGLE = parse_centers("0,0;1,0;0,1")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def test_same_sphere():
    origin = as_point((0, 0))
    assert same_sphere(origin, as_point((3, 4)), as_point((5, 0)))
    assert not same_sphere(origin, as_point((1, 0)), as_point((2, 0)))


def test_dimension_mismatch():
    with pytest.raises(MalformedInputError):
        same_sphere(as_point((0, 0)), as_point((1,)), as_point((1, 0)))


@given(rationals, rationals, rationals, rationals)
def test_same_sphere_is_reflexive_and_symmetric(a, b, c, d):
    center, x, y = (Fraction(0), Fraction(1, 3)), (a, b), (c, d)
    assert same_sphere(center, x, x)
    assert same_sphere(center, x, y) == same_sphere(center, y, x)


def test_general_position():
    assert general_position_check(TRIANGLE)
    assert not general_position_check(parse_centers("0,0;1,0;2,0"))
    assert general_position_check(parse_centers("5,5"))
    assert not general_position_check(parse_centers("0,0;1,1;2,2;0,1"))


def test_parse_centers_accepts_fractions():
    assert parse_centers("0,0; 1/2,1") == ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1)))
    with pytest.raises(MalformedInputError):
        parse_centers("a,b")
    with pytest.raises(MalformedInputError):
        parse_centers("")


def test_config_validation():
    with pytest.raises(MalformedInputError):
        SprayConfig(parse_centers("0,0;0,0"))
    with pytest.raises(MalformedInputError):
        SprayConfig(parse_centers("0,0;1"))


def test_rational_grid_starts_with_height_one():
    first = list(itertools.islice(rational_grid(2), 9))
    values = [Fraction(-1), Fraction(0), Fraction(1)]
    assert first == list(itertools.product(values, repeat=2))


def test_rational_grid_has_no_repeats():
    points = list(itertools.islice(rational_grid(2), 3000))
    assert len(set(points)) == len(points)


def test_collinear_centers_rejected():
    with pytest.raises(GeneralPositionError):
        spray_stream(SprayConfig(parse_centers("0,0;1,0;2,0")))


def test_profile_bounds():
    stream = spray_stream(SprayConfig(TRIANGLE))
    assert stream.profile_bounds[frozenset([0, 1])] == 2
    assert stream.profile_bounds[frozenset([0, 1, 2])] == 1
    assert frozenset([0]) not in stream.declared_profile


def test_three_sprays_cover_cleanly():
    cover = cover_with_sprays(SprayConfig(TRIANGLE), 600)
    assert len(cover.points) == 600
    assert set(cover.coloring.assignment) <= {0, 1, 2}
    assert cover.audit.violations == ()


def test_two_sprays_counts_never_shrink():
    growth = max_count_growth(SprayConfig(parse_centers("0,0;1,0")), [100, 400])
    assert growth[0] <= growth[1]


def test_cover_csv(tmp_path):
    cover = cover_with_sprays(SprayConfig(TRIANGLE), 20)
    path = tmp_path / "cover.csv"
    write_cover_csv(cover, path)
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["x_num", "x_den", "y_num", "y_den", "color"]
    assert len(rows) == 21
    assert rows[1] == ["-1", "1", "-1", "1", str(cover.coloring[0])]


@pytest.mark.slow
def test_three_sprays_at_scale():
    cover = cover_with_sprays(SprayConfig(TRIANGLE), 10_000)
    assert cover.audit.violations_of("certificate") == []
    assert cover.audit.violations_of("profile") == []


@pytest.mark.slow
def test_two_sprays_growth_at_scale():
    growth = max_count_growth(SprayConfig(parse_centers("0,0;1,0")), [1000, 10_000])
    assert growth[0] <= growth[1]
