"""Tests for divisions, contraction and full-division extraction."""

from fractions import Fraction
from unittest.mock import patch

import pytest
from hypothesis import given, settings

from tensor_extremal.core import BitTensor, Shape, full_tensor, tensor_new, zero_tensor
from tensor_extremal.division import (
    Division,
    classify_blocks,
    compose,
    contract,
    count_divisions,
    division_total,
    enumerate_divisions,
    extract_full_division_pigeonhole,
    find_full_division,
    full_division_set,
    intervals,
    is_full,
    is_heavy,
    light_block_bound_holds,
    pigeonhole_threshold,
    shared_division_counts,
    split_blocks,
    stack_blocks,
    uniform_division,
    validate_division,
)
from tensor_extremal.exceptions import (
    InvalidArgumentError,
    ResourceCapError,
    UnsupportedDimensionError,
)
from tensor_extremal.extremal import AlphaTable
from tensor_extremal.pattern import make_cyclic_latin
from tests.strategies import tensors


class TestEnumeration:
    def test_two_parts_of_three(self) -> None:
        found = list(enumerate_divisions((3, 3), 2))
        assert len(found) == 4
        assert found[0] == Division(((1,), (1,)))

    def test_single_part(self) -> None:
        assert list(enumerate_divisions((3, 4, 2), 1)) == [Division(((), (), ()))]

    def test_singletons(self) -> None:
        assert list(enumerate_divisions((3, 3), 3)) == [Division(((1, 2), (1, 2)))]

    def test_k_out_of_range(self) -> None:
        with pytest.raises(InvalidArgumentError):
            next(enumerate_divisions((3, 2), 3))

    @pytest.mark.parametrize("p,k,t,expected", [(3, 2, 2, 4), (5, 3, 3, 216), (4, 1, 3, 1)])
    def test_count_divisions(self, p: int, k: int, t: int, expected: int) -> None:
        assert count_divisions(p, k, t) == expected
        assert sum(1 for _ in enumerate_divisions(Shape.cubic(p, t), k)) == expected

    def test_division_total_of_box(self) -> None:
        assert division_total((3, 4), 2) == 6


def test_validate_division() -> None:
    validate_division(Division(((1,), (2,))), (3, 3))
    for cuts in [((0,), (1,)), ((1,), (3,)), ((2, 1), (1,)), ((1,),)]:
        with pytest.raises(InvalidArgumentError):
            validate_division(Division(cuts), (3, 3))


def test_intervals() -> None:
    assert intervals(Division(((1,), ())), (3, 2)) == [[(0, 1), (1, 3)], [(0, 2)]]


def test_contract_examples() -> None:
    assert contract(zero_tensor((3, 3)), Division(((1,), (2,)))) == zero_tensor((2, 2))
    M = make_cyclic_latin(3, 2)
    assert contract(M, Division(((1, 2), (1, 2)))) == M
    identity = tensor_new((2, 2), [(0, 0), (1, 1)])
    assert contract(identity, Division(((), ()))) == full_tensor((1, 1))


def test_is_full_examples() -> None:
    D = Division(((2,), (1,)))
    assert is_full(full_tensor((4, 4)), D)
    assert not is_full(zero_tensor((4, 4)), D)
    # Ones at (0,0), (1,3), (2,2) and (3,1): one per quadrant.
    assert is_full(make_cyclic_latin(4, 2), Division(((2,), (2,))))


class TestFindFullDivision:
    def test_full_tensor_gives_first_division(self) -> None:
        assert find_full_division(full_tensor((3, 3)), 2) == Division(((1,), (1,)))

    def test_too_few_ones(self) -> None:
        assert find_full_division(tensor_new((3, 3), [(0, 0), (1, 1), (2, 2)]), 2) is None

    def test_quadrants(self, quadrants: BitTensor) -> None:
        D = find_full_division(quadrants, 2)
        assert D is not None
        assert is_full(quadrants, D)
        assert D == Division(((1,), (1,)))

    def test_cap(self) -> None:
        with pytest.raises(ResourceCapError) as excinfo:
            find_full_division(full_tensor((5, 5)), 2, cap=3)
        assert excinfo.value.flag == "--cap-divisions"

    def test_full_division_set(self, quadrants: BitTensor) -> None:
        found = full_division_set(quadrants, 2)
        assert Division(((2,), (2,))) in found
        assert all(is_full(quadrants, D) for D in found)


@given(tensors(min_t=2, max_t=3, max_side=4))
@settings(max_examples=100, deadline=None)
def test_contract_sparse_and_dense_agree(M: BitTensor) -> None:
    if min(M.dims) < 2:
        return
    for D in enumerate_divisions(M.shape, 2):
        dense = contract(M, D)
        with patch("tensor_extremal.division.DENSE_CELL_LIMIT", 0):
            assert contract(M, D) == dense


def test_compose_matches_repeated_contraction() -> None:
    M = make_cyclic_latin(4, 2)
    outer = Division(((1, 2, 3), (2,)))
    inner = Division(((2,), (1,)))
    composed = compose(outer, inner)
    assert composed == Division(((2,), (2,)))
    assert contract(contract(M, outer), inner) == contract(M, composed)


@given(tensors(min_t=2, max_t=3, max_side=4))
@settings(max_examples=100, deadline=None)
def test_full_division_is_full(M: BitTensor) -> None:
    k = min(2, min(M.dims))
    D = find_full_division(M, k)
    if D is not None:
        assert is_full(M, D)
    else:
        assert all(not is_full(M, E) for E in enumerate_divisions(M.shape, k))


def test_is_heavy() -> None:
    assert not is_heavy(zero_tensor((3, 3)), 2)
    assert not is_heavy(full_tensor((1, 1)), 2)
    assert is_heavy(full_tensor((2, 2)), 2, AlphaTable(base=lambda k: 1))
    with pytest.raises(InvalidArgumentError):
        is_heavy(full_tensor((2, 3)), 2)


def test_uniform_division() -> None:
    assert uniform_division((4, 6), 2) == Division(((2,), (2, 4)))
    with pytest.raises(InvalidArgumentError):
        uniform_division((4, 4), 3)


def test_split_and_stack_blocks() -> None:
    identity = tensor_new((4, 4), [(i, i) for i in range(4)])
    blocks = split_blocks(identity, 2)
    assert set(blocks) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert blocks[(0, 0)] == blocks[(1, 1)] == tensor_new((2, 2), [(0, 0), (1, 1)])
    assert blocks[(0, 1)] == zero_tensor((2, 2))
    stacked = stack_blocks([blocks[(0, 0)], blocks[(1, 0)]], 0)
    assert stacked == tensor_new((4, 2), [(0, 0), (1, 1)])


class TestPigeonhole:
    def test_full_blocks(self) -> None:
        blocks = [full_tensor((2, 2, 2))] * 3
        extracted = extract_full_division_pigeonhole(blocks, 0, 2)
        assert extracted is not None
        division, chosen = extracted
        assert chosen == (0, 1)
        assert division == Division(((2,), (1,), (1,)))
        assert is_full(stack_blocks(blocks, 0), division)

    def test_not_enough_blocks(self) -> None:
        blocks = [full_tensor((2, 2, 2)), zero_tensor((2, 2, 2))]
        assert extract_full_division_pigeonhole(blocks, 1, 2) is None

    def test_shared_counts(self) -> None:
        blocks = [full_tensor((2, 2, 2)), zero_tensor((2, 2, 2)), full_tensor((2, 2, 2))]
        shares, with_full = shared_division_counts(blocks, 2, 2)
        assert with_full == 2
        assert shares[Division(((1,), (1,)))] == 2

    def test_threshold(self) -> None:
        assert pigeonhole_threshold(3, 2, 3) == 4

    def test_mixed_block_shapes(self) -> None:
        with pytest.raises(InvalidArgumentError):
            stack_blocks([full_tensor((2, 2)), full_tensor((3, 3))], 0)


def test_light_block_bound() -> None:
    assert light_block_bound_holds(0, Fraction(1), 2, 3)
    # 2^3 (1 * 2)^(3/2) = 16 sqrt 2, about 22.6
    assert light_block_bound_holds(22, Fraction(1), 2, 3)
    assert not light_block_bound_holds(23, Fraction(1), 2, 3)


def test_classify_blocks() -> None:
    result = classify_blocks(zero_tensor((4, 4, 4)), 2, 2)
    assert result.light == []
    assert all(indices == [] for indices in result.heavy.values())
    assert result.light_bound_holds

    M = tensor_new((4, 4, 4), [(0, 0, 0), (3, 3, 3)])
    result = classify_blocks(M, 2, 2)
    assert sorted(result.light) == [(0, 0, 0), (1, 1, 1)]

    with pytest.raises(UnsupportedDimensionError):
        classify_blocks(zero_tensor((4, 4)), 2, 2)
