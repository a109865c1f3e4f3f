"""Tests for Latin matrix enumeration."""

import logging

import pytest

from tensor_extremal.core import tensor_new
from tensor_extremal.exceptions import InvalidArgumentError, ResourceCapError
from tensor_extremal.latin import (
    latin_count,
    latin_count_avoiders,
    latin_enumerate,
    latin_reach,
    latin_square_to_tensor,
    latin_squares_brute_force,
)
from tensor_extremal.pattern import is_latin, is_permutation, make_cyclic_latin, make_identity


@pytest.mark.parametrize("n,t,expected", [(3, 2, 6), (1, 3, 1), (2, 3, 2), (3, 3, 12)])
def test_latin_count(n: int, t: int, expected: int) -> None:
    assert latin_count(n, t) == expected


@pytest.mark.slow
def test_order_four_cubes() -> None:
    assert latin_count(4, 3) == 576


def test_permutations_at_t2() -> None:
    found = list(latin_enumerate(4, 2))
    assert len(found) == 24
    assert all(is_permutation(M) for M in found)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_latin_squares(n: int) -> None:
    enumerated = list(latin_enumerate(n, 3))
    squares = {latin_square_to_tensor(s) for s in latin_squares_brute_force(n)}
    assert set(enumerated) == squares
    assert len(enumerated) == len(squares)
    for M in enumerated:
        assert is_latin(M)
        assert M.ones_count == n**2


def test_four_dimensional_order_two() -> None:
    found = list(latin_enumerate(2, 4))
    assert len(found) == 2
    assert make_cyclic_latin(2, 4) in found
    assert all(M.ones_count == 8 for M in found)


def test_reach() -> None:
    assert latin_reach(3) == 4
    with pytest.raises(ResourceCapError) as excinfo:
        latin_count(5, 3)
    assert excinfo.value.flag == "--latin-reach"


def test_reach_override_warns(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="tensor_extremal.latin"):
        assert latin_count(2, 6, reach=2) == 2
    assert "reach raised" in caplog.text


def test_invalid_dimension() -> None:
    with pytest.raises(InvalidArgumentError):
        latin_count(2, 1)


def test_avoiders() -> None:
    assert latin_count_avoiders(2, 3, make_identity(3, 3)) == latin_count(2, 3)
    assert latin_count_avoiders(2, 3, make_identity(3, 2)) == 2
    single = tensor_new((1, 1, 1), [(0, 0, 0)])
    assert latin_count_avoiders(3, 3, single) == 0
