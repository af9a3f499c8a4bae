import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.core import Coloring, is_acceptable
from modules.cubes import CubeSpec, make_cube, make_halfcube, make_n_cube, transversal_parbedding
from modules.errors import MalformedInputError, UnverifiedWitnessError
from modules.morphisms import (
    FINDERS,
    MorphismKind,
    SearchStatus,
    Verdict,
    compose_parbeddings,
    embeds_all_small_cubes,
    enumerate_injections_oracle,
    fcn_estimate,
    find_embedding,
    find_parbedding,
    find_weak_embedding,
    pullback_coloring,
    verify_embedding,
    verify_parbedding,
    verify_weak_embedding,
    witness_from_dict,
)
from modules.setsystem import SetTuple


def small_structures():
    """Two-relation cubes and halfcubes with at most 8 elements"""
    return [
        make_n_cube(2, 1),
        make_n_cube(2, 2),
        make_halfcube(SetTuple.singletons(2), 3),
        make_halfcube(SetTuple.singletons(2), 4),
        make_cube(CubeSpec(SetTuple.of(1, [[0], [0]]), (2,))),
        make_cube(CubeSpec(SetTuple.of(1, [[0], []]), (3,))),
        make_cube(CubeSpec(SetTuple.of(2, [[0, 1], [1]]), (2, 2))),
        make_cube(CubeSpec(SetTuple.of(3, [[0], [1, 2]]), (2, 2, 2))),
    ]


def pairs(max_source=5):
    return [(b, a) for b, a in itertools.product(small_structures(), repeat=2) if b.size <= max_source]


class TestVerify:
    def test_identity_is_an_embedding(self, square):
        assert verify_embedding(square, square, (0, 1, 2, 3))

    def test_swap_is_only_weak(self, square):
        swapped = (0, 2, 1, 3)
        assert not verify_embedding(square, square, swapped)
        assert verify_weak_embedding(square, square, swapped, (1, 0))

    def test_non_injective_map(self, square):
        assert not verify_parbedding(square, square, (0, 0, 1, 1), (0, 1))

    def test_pi_must_be_a_permutation(self, square):
        with pytest.raises(MalformedInputError):
            verify_weak_embedding(square, square, (0, 1, 2, 3), (0, 0))

    def test_map_must_stay_in_target(self, square):
        with pytest.raises(MalformedInputError):
            verify_embedding(square, square, (0, 1, 2, 9))


class TestSearch:
    def test_small_square_into_large(self):
        outcome = find_embedding(make_n_cube(2, 2), make_n_cube(2, 3))
        assert outcome.status is SearchStatus.FOUND
        assert outcome.witness.f == (0, 1, 3, 4)
        assert verify_embedding(make_n_cube(2, 2), make_n_cube(2, 3), outcome.witness.f)

    def test_large_square_does_not_fit(self):
        assert find_embedding(make_n_cube(2, 3), make_n_cube(2, 2)).status is SearchStatus.NONE

    def test_budget_gives_indeterminate(self):
        outcome = find_embedding(make_n_cube(2, 3), make_n_cube(2, 4), budget=1)
        assert outcome.status is SearchStatus.INDETERMINATE
        assert outcome.witness is None

    def test_weak_embedding_finds_swap(self):
        source = make_cube(CubeSpec(SetTuple.of(1, [[0], []]), (2,)))
        target = make_cube(CubeSpec(SetTuple.of(1, [[], [0]]), (2,)))
        assert find_embedding(source, target).status is SearchStatus.NONE
        outcome = find_weak_embedding(source, target)
        assert outcome.found
        assert outcome.witness.pi == (1, 0)

    def test_parbedding_of_the_construction_is_found(self):
        built = transversal_parbedding(SetTuple.of(3, [[0, 1], [1, 2]]), range(2), 0)
        outcome = find_parbedding(built.source, built.target)
        assert outcome.found
        assert verify_parbedding(built.source, built.target, outcome.witness.f, outcome.witness.beta)

    def test_metrics_are_collected(self):
        outcome = find_embedding(make_n_cube(2, 2), make_n_cube(2, 3))
        assert outcome.metrics.nodes >= 4
        assert outcome.metrics.outer_iterations == 1

    @pytest.mark.parametrize("source,target", pairs())
    def test_embedding_matches_exhaustive_search(self, source, target):
        outcome = find_embedding(source, target)
        expected = enumerate_injections_oracle(source, target, MorphismKind.EMBEDDING)
        assert outcome.found == (expected is not None)
        if expected is not None:
            assert outcome.witness.f == expected.f

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", [MorphismKind.WEAK, MorphismKind.PARBEDDING])
    def test_other_kinds_match_exhaustive_search(self, kind):
        for source, target in pairs(max_source=4):
            outcome = FINDERS[kind](source, target)
            expected = enumerate_injections_oracle(source, target, kind)
            assert outcome.found == (expected is not None)
            if expected is not None:
                assert outcome.witness == expected


class TestDerived:
    def test_pullback_coloring(self):
        built = transversal_parbedding(SetTuple.of(3, [[0, 1], [1, 2]]), range(2), 0)
        chi = Coloring(built.target.n, (1,) * built.target.size)
        psi = pullback_coloring(built.source, built.target, chi, built.mapping, built.beta)
        assert psi.n == built.source.n
        assert psi.assignment == (built.beta[1],) * built.source.size

    def test_pullback_rejects_bad_witness(self, square):
        with pytest.raises(UnverifiedWitnessError):
            pullback_coloring(square, square, Coloring(2, (0, 0, 0, 0)), (0, 0, 0, 0), (0, 1))

    def test_composition_of_two_parbeddings(self):
        built = transversal_parbedding(SetTuple.of(3, [[0, 1], [1, 2]]), range(2), 0)
        mirrored = make_cube(CubeSpec(SetTuple.of(3, [[1, 2], [0, 1]]), (2, 2, 2)))
        second = find_parbedding(built.target, mirrored)
        assert second.found
        assert second.witness.f != tuple(range(built.target.size))
        f, beta = compose_parbeddings(built.mapping, built.beta, second.witness.f, second.witness.beta)
        assert beta == tuple(built.beta[b] for b in second.witness.beta)
        assert verify_parbedding(built.source, mirrored, f, beta)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 1), min_size=27, max_size=27))
    def test_pullback_counts_stay_under_the_target_counts(self, colors):
        built = transversal_parbedding(SetTuple.of(3, [[0, 1], [1, 2]]), range(3), 0)
        chi = Coloring(built.target.n, tuple(colors))
        psi = pullback_coloring(built.source, built.target, chi, built.mapping, built.beta)
        source_counts = is_acceptable(built.source, psi).counts
        target_counts = is_acceptable(built.target, chi).counts
        for x in range(built.source.size):
            for j in range(built.source.n):
                transported = sum(target_counts[built.mapping[x]][i]
                                  for i in range(built.target.n) if built.beta[i] == j)
                assert source_counts[x][j] <= transported

    def test_small_cubes(self):
        grid = make_n_cube(2, 3)
        assert embeds_all_small_cubes(grid, SetTuple.singletons(2), 2) is Verdict.TRUE
        assert embeds_all_small_cubes(grid, SetTuple.singletons(2), 4) is Verdict.FALSE
        assert embeds_all_small_cubes(grid, SetTuple.singletons(2), 2, node_budget=1) is Verdict.INDETERMINATE

    def test_fcn_literal_reading(self):
        estimate = fcn_estimate(make_n_cube(2, 3), 2)
        assert estimate.status is Verdict.TRUE
        assert estimate.d == 1
        assert estimate.witness == SetTuple.of(1, [[], []])

    def test_fcn_nonempty_sets(self):
        estimate = fcn_estimate(make_n_cube(2, 3), 2, nonempty_only=True)
        assert estimate.d == 2
        assert estimate.witness == SetTuple.singletons(2)

    def test_witness_document(self):
        outcome = find_weak_embedding(make_n_cube(2, 2), make_n_cube(2, 2))
        assert witness_from_dict(outcome.witness.as_dict()) == outcome.witness
        with pytest.raises(MalformedInputError):
            witness_from_dict({"kind": "embed"})
