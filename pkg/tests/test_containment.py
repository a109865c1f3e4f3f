"""Tests for the containment search and its brute-force oracle."""

from unittest.mock import patch

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensor_extremal.containment import (
    avoids,
    brute_force_embeddings,
    embedding_from_full_division,
    find_embedding,
    fits,
    is_witness,
    search_embedding,
)
from tensor_extremal.core import (
    BitTensor,
    delete_hyperplane,
    full_tensor,
    tensor_new,
    zero_tensor,
)
from tensor_extremal.division import Division
from tensor_extremal.exceptions import InvalidArgumentError, SearchBudgetExceeded
from tensor_extremal.pattern import Pattern, make_cyclic_latin, make_identity
from tests.strategies import patterns, tensors


class TestFindEmbedding:
    def test_identity_in_identity(self, identity2: Pattern) -> None:
        embedding = find_embedding(identity2.tensor, identity2)
        assert embedding is not None
        assert embedding.selections == ((0, 1), (0, 1))
        assert embedding.as_lists() == [[0, 1], [0, 1]]

    def test_anti_diagonal_avoids_identity(
        self, anti_diagonal: BitTensor, identity2: Pattern
    ) -> None:
        assert find_embedding(anti_diagonal, identity2) is None

    def test_band_contains_identity(self, band3: BitTensor, identity2: Pattern) -> None:
        embedding = find_embedding(band3, identity2)
        assert embedding is not None
        assert is_witness(band3, identity2, embedding.selections)
        assert next(brute_force_embeddings(band3, identity2)) == ((0, 1), (0, 1))

    def test_anti_staircase_avoids_identity(
        self, anti_staircase3: BitTensor, identity2: Pattern
    ) -> None:
        assert avoids(anti_staircase3, identity2)
        assert list(brute_force_embeddings(anti_staircase3, identity2)) == []

    def test_cyclic_latin_contains_cubic_identity(self) -> None:
        M = make_cyclic_latin(3, 3)
        P = make_identity(3, 3)
        embedding = find_embedding(M, P)
        assert embedding is not None
        assert embedding.selections == ((0, 1, 2),) * 3
        assert not avoids(M, P)

    def test_witness_is_lexicographically_least(self) -> None:
        M = tensor_new((3, 4), [(0, 1), (0, 3), (1, 2), (2, 0)])
        P = tensor_new((2, 2), [(0, 1), (1, 0)])
        embedding = find_embedding(M, P)
        assert embedding is not None
        assert embedding.selections == ((0, 1), (2, 3))
        assert embedding.selections == min(brute_force_embeddings(M, P))

    def test_sparse_lookup_matches_dense(self) -> None:
        M = make_cyclic_latin(4, 3)
        P = tensor_new((2, 2, 2), [(0, 0, 1), (1, 1, 0)])
        dense = search_embedding(M, P)
        assert dense.embedding is not None
        assert dense.embedding.selections == ((0, 1), (1, 2), (1, 3))
        with patch("tensor_extremal.containment.DENSE_CELL_LIMIT", 0):
            sparse = search_embedding(M, P)
        assert sparse == dense


def test_full_tensor_contains_every_fitting_pattern() -> None:
    M = full_tensor((3, 3, 3))
    for P in [make_identity(3, 2).tensor, tensor_new((2, 2, 2), [(0, 1, 1), (1, 0, 0)])]:
        assert not avoids(M, P)


def test_zero_tensor_avoids_nonempty_patterns(identity2: Pattern) -> None:
    assert avoids(zero_tensor((3, 3)), identity2)
    assert avoids(zero_tensor((1, 1)), tensor_new((1, 1), [(0, 0)]))


def test_pattern_larger_than_matrix_does_not_fit(identity2: Pattern) -> None:
    M = full_tensor((1, 5))
    assert not fits(M, identity2)
    search = search_embedding(M, identity2)
    assert not search.contains
    assert search.nodes == 0


def test_empty_pattern_is_contained_when_it_fits() -> None:
    search = search_embedding(zero_tensor((3, 3)), zero_tensor((2, 2)))
    assert search.contains
    assert search.embedding is not None
    assert is_witness(zero_tensor((3, 3)), zero_tensor((2, 2)), search.embedding.selections)


def test_dimension_mismatch(identity2: Pattern) -> None:
    with pytest.raises(InvalidArgumentError):
        avoids(full_tensor((2, 2, 2)), identity2)


def test_budget_exhaustion(identity2: Pattern) -> None:
    with pytest.raises(SearchBudgetExceeded) as excinfo:
        search_embedding(identity2.tensor, identity2, budget=1)
    assert excinfo.value.nodes == 2


def test_nodes_are_reported(identity2: Pattern) -> None:
    search = search_embedding(identity2.tensor, identity2)
    assert search.nodes >= 3


def test_embedding_from_full_division(quadrants: BitTensor, identity2: Pattern) -> None:
    D = Division(((2,), (2,)))
    embedding = embedding_from_full_division(quadrants, D, identity2)
    assert embedding.selections == ((0, 2), (0, 2))
    assert is_witness(quadrants, identity2, embedding.selections)


def test_embedding_from_full_division_needs_free_pattern() -> None:
    not_free = tensor_new((2, 2, 2), [(0, 0, 0), (0, 1, 1)])
    M = full_tensor((2, 2, 2))
    with pytest.raises(InvalidArgumentError):
        embedding_from_full_division(M, Division(((1,), (1,), (1,))), not_free)


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_search_agrees_with_brute_force(data) -> None:
    t = data.draw(st.integers(1, 3))
    M = data.draw(tensors(min_t=t, max_t=t, max_side=3))
    P = data.draw(tensors(min_t=t, max_t=t, max_side=2))
    embedding = find_embedding(M, P)
    expected = min(brute_force_embeddings(M, P), default=None)
    assert (embedding is None) == (expected is None)
    if embedding is not None:
        assert embedding.selections == expected
        assert is_witness(M, P, embedding.selections)


@given(tensors(min_t=2, max_t=2, max_side=4), patterns(t=2), st.integers(0, 1), st.integers(0, 3))
@settings(max_examples=150, deadline=None)
def test_hyperplane_deletion_keeps_avoidance(M: BitTensor, P: BitTensor, r: int, j: int) -> None:
    if M.dims[r] < 2 or j >= M.dims[r] or not avoids(M, P):
        return
    assert avoids(delete_hyperplane(M, r, j), P)
