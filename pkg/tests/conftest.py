"""Shared fixtures for the tensor-extremal tests."""

import pytest

from tensor_extremal.core import BitTensor, tensor_new
from tensor_extremal.pattern import Pattern, make_cyclic_latin, make_identity


@pytest.fixture
def identity2() -> Pattern:
    """The 2x2 identity pattern."""
    return make_identity(2, 2)


@pytest.fixture
def anti_diagonal() -> BitTensor:
    return tensor_new((2, 2), [(0, 1), (1, 0)])


@pytest.fixture
def band3() -> BitTensor:
    """3x3 band along the main diagonal; (0,0) and (1,1) already form an identity."""
    return tensor_new((3, 3), [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)])


@pytest.fixture
def anti_staircase3() -> BitTensor:
    """3x3 staircase along the anti-diagonal with 2n-1 ones, avoiding the 2x2 identity."""
    return tensor_new((3, 3), [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)])


@pytest.fixture
def cyclic_cube() -> BitTensor:
    """``make_cyclic_latin(2, 3)``: ones where the coordinate sum is even."""
    return make_cyclic_latin(2, 3)


@pytest.fixture
def quadrants() -> BitTensor:
    """4x4 tensor with one 1 in each 2x2 quadrant."""
    return tensor_new((4, 4), [(0, 0), (0, 2), (2, 0), (2, 2)])
