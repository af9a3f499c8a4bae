import random

import pytest

from modules.identities import (
    SUITES,
    dandy_suite,
    depth_cross_check_suite,
    fine_depth_suite,
    depth_formula_suite,
    parbedding_suite,
    pigeonhole_suite,
    restriction_suite,
    run_suites,
    transversal_depth_suite,
)


def rng():
    return random.Random(7)


def test_depth_formula():
    result = depth_formula_suite(5, 0, rng())
    assert result.passed
    assert result.checked == sum(n for n in range(1, 6))


def test_transversal_depth():
    assert transversal_depth_suite(2, 100, rng()).passed


def test_dandy():
    assert dandy_suite(3, 20, rng()).passed


def test_restriction():
    result = restriction_suite(0, 300, rng())
    assert result.passed
    assert result.checked > 0


def test_depth_cross_check():
    assert depth_cross_check_suite(3, 0, rng()).passed


def test_parbedding():
    assert parbedding_suite(2, 0, rng()).passed


def test_pigeonhole():
    assert pigeonhole_suite(0, 0, rng()).passed


def test_pigeonhole_threshold_can_be_missed():
    result = pigeonhole_suite(0, 0, rng(), threshold=500, lengths=(100, 1000))
    assert not result.passed
    assert result.counterexample["strategy"] == "greedy"


def test_runs_are_reproducible():
    first = [r.as_dict() for r in run_suites(2, 50, seed=3, names=["transversal-depth", "restriction"])]
    second = [r.as_dict() for r in run_suites(2, 50, seed=3, names=["transversal-depth", "restriction"])]
    assert first == second


def test_fine_depth():
    result = fine_depth_suite(2, 100, rng())
    assert result.passed, result.counterexample
    assert result.checked == 1 + 3 + 1 + 9 + 100 // 50


@pytest.mark.slow
def test_every_suite_at_acceptance_scale():
    results = run_suites(4, 500, seed=7)
    assert [r.name for r in results] == list(SUITES)
    assert all(r.passed for r in results), [r.as_dict() for r in results if not r.passed]


@pytest.mark.slow
class TestAcceptanceScale:
    def test_depth_formula_up_to_seven(self):
        result = depth_formula_suite(7, 0, rng())
        assert result.passed, result.counterexample
        assert result.checked == 28

    def test_transversal_depth_with_ten_thousand_random_tuples(self):
        result = transversal_depth_suite(3, 10_000, rng())
        assert result.passed, result.counterexample
        assert result.checked >= 10_000

    def test_dandy_with_a_thousand_random_families(self):
        result = dandy_suite(4, 10_000, rng())
        assert result.passed, result.counterexample
        exhaustive = dandy_suite(4, 0, rng()).checked
        assert result.checked - exhaustive >= 1_000

    def test_restriction_with_ten_thousand_pairs(self):
        result = restriction_suite(6, 10_000, rng())
        assert result.passed, result.counterexample
        assert result.checked >= 10_000

    def test_fine_depth_on_random_cubes(self):
        result = fine_depth_suite(2, 10_000, rng())
        assert result.passed, result.counterexample
