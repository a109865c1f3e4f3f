"""
Storage and elementary transformations of t-dimensional 0-1 matrices.

A :class:`BitTensor` is an immutable value: a :class:`Shape` plus the sorted,
duplicate-free tuple of its 1-coordinates. All indices are zero-based. A dense
``numpy`` view (and a bit-packed one) is built lazily for small shapes;
containment and contraction read it while the shape stays under the dense
cell limit.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from tensor_extremal import config
from tensor_extremal.constants import DENSE_CELL_LIMIT
from tensor_extremal.exceptions import (
    InvalidArgumentError,
    ResourceCapError,
    TensorFormatError,
    UnsupportedDimensionError,
)

log = logging.getLogger(__name__)

Coord = Tuple[int, ...]
ShapeLike = Union["Shape", Sequence[int]]


@dataclass(frozen=True)
class Shape:
    """Dimensions ``(n_1, ..., n_t)`` of a t-dimensional matrix."""

    dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise InvalidArgumentError("A shape needs at least one dimension (t >= 1).")
        for axis, size in enumerate(dims):
            if size < 1:
                raise InvalidArgumentError(f"Axis {axis} has size {size}; sizes must be >= 1.")

    @classmethod
    def cubic(cls, n: int, t: int) -> "Shape":
        """Return the ``n x ... x n`` shape with ``t`` axes."""
        if t < 1:
            raise InvalidArgumentError(f"t must be >= 1, got {t}.")
        return cls((n,) * t)

    @property
    def t(self) -> int:
        return len(self.dims)

    @property
    def cells(self) -> int:
        return math.prod(self.dims)

    @property
    def is_cubic(self) -> bool:
        return len(set(self.dims)) == 1

    def drop(self, r: int) -> "Shape":
        """Shape with axis ``r`` removed."""
        return Shape(self.dims[:r] + self.dims[r + 1 :])

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __getitem__(self, r: int) -> int:
        return self.dims[r]


def as_shape(shape: ShapeLike) -> Shape:
    return shape if isinstance(shape, Shape) else Shape(tuple(shape))


@dataclass(frozen=True)
class BitTensor:
    """A t-dimensional 0-1 matrix stored as its sorted set of 1-coordinates."""

    shape: Shape
    ones: Tuple[Coord, ...] = field(default=())

    def __post_init__(self) -> None:
        shape = as_shape(self.shape)
        object.__setattr__(self, "shape", shape)
        canonical = set()
        for raw in self.ones:
            coord = tuple(int(i) for i in raw)
            if len(coord) != shape.t:
                raise TensorFormatError(
                    f"Coordinate {coord} has {len(coord)} indices, expected t={shape.t}.",
                    field="ones",
                )
            for axis, (index, size) in enumerate(zip(coord, shape.dims)):
                if not 0 <= index < size:
                    raise TensorFormatError(
                        f"Coordinate {coord} is out of bounds on axis {axis} "
                        f"(index {index}, size {size}).",
                        field="ones",
                    )
            canonical.add(coord)
        object.__setattr__(self, "ones", tuple(sorted(canonical)))

    @property
    def t(self) -> int:
        return self.shape.t

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.shape.dims

    @property
    def ones_count(self) -> int:
        return len(self.ones)

    @cached_property
    def one_set(self) -> FrozenSet[Coord]:
        return frozenset(self.ones)

    @cached_property
    def dense(self) -> np.ndarray:
        """Boolean ``numpy`` array of the tensor (only for small shapes)."""
        if self.shape.cells > DENSE_CELL_LIMIT:
            raise InvalidArgumentError(
                f"Dense form is limited to {DENSE_CELL_LIMIT} cells, shape has {self.shape.cells}."
            )
        array = np.zeros(self.dims, dtype=bool)
        if self.ones:
            array[tuple(np.array(self.ones).T)] = True
        return array

    def packed(self) -> np.ndarray:
        """Bit-packed dense form, cells in lexicographic order."""
        return np.packbits(self.dense.ravel())

    def __contains__(self, coord: object) -> bool:
        return coord in self.one_set

    def is_cubic(self) -> bool:
        return self.shape.is_cubic


def tensor_new(shape: ShapeLike, ones: Iterable[Sequence[int]] = ()) -> BitTensor:
    """Build a canonical tensor from a shape and a list of 1-coordinates.

    Raises:
        TensorFormatError: If a coordinate is out of bounds or has the wrong length.
    """
    return BitTensor(as_shape(shape), tuple(tuple(c) for c in ones))


def zero_tensor(shape: ShapeLike) -> BitTensor:
    return BitTensor(as_shape(shape), ())


def full_tensor(shape: ShapeLike) -> BitTensor:
    shape = as_shape(shape)
    return BitTensor(shape, tuple(iter_cells(shape)))


def with_one(M: BitTensor, coord: Sequence[int]) -> BitTensor:
    """Return ``M`` with an extra 1 at ``coord``."""
    return BitTensor(M.shape, M.ones + (tuple(coord),))


def from_dense(array: np.ndarray) -> BitTensor:
    """Build a tensor from any array-like of truthy/falsy entries."""
    array = np.asarray(array, dtype=bool)
    return BitTensor(Shape(array.shape), tuple(map(tuple, np.argwhere(array).tolist())))


def iter_cells(shape: ShapeLike) -> Iterator[Coord]:
    """All coordinates of ``shape`` in lexicographic order."""
    return itertools.product(*(range(d) for d in as_shape(shape).dims))


def dominates(A: BitTensor, B: BitTensor) -> bool:
    """True iff ``A`` and ``B`` share a shape and ``A >= B`` entrywise."""
    return A.shape == B.shape and B.one_set <= A.one_set


def _check_axis(M: BitTensor, r: int) -> None:
    if M.t < 2:
        raise UnsupportedDimensionError(f"Operation needs t >= 2, tensor has t={M.t}.")
    if not 0 <= r < M.t:
        raise InvalidArgumentError(f"Axis {r} out of range for t={M.t}.")


def slice_tensor(M: BitTensor, r: int, j: int) -> BitTensor:
    """The ``(r, j)``-slice: fix axis ``r`` to ``j`` and delete that axis.

    Raises:
        UnsupportedDimensionError: If ``M`` is one-dimensional.
        InvalidArgumentError: If ``r`` or ``j`` is out of range.
    """
    _check_axis(M, r)
    if not 0 <= j < M.dims[r]:
        raise InvalidArgumentError(f"Index {j} out of range for axis {r} of size {M.dims[r]}.")
    ones = tuple(c[:r] + c[r + 1 :] for c in M.ones if c[r] == j)
    return BitTensor(M.shape.drop(r), ones)


def smash(M: BitTensor, r: int) -> BitTensor:
    """The ``r``-th smash: project every 1 along axis ``r``.

    The result has a 1 at ``(i_1, ..., i_{t-1})`` iff some ``j`` gives a 1 in ``M``
    when ``j`` is inserted at position ``r``.
    """
    _check_axis(M, r)
    return BitTensor(M.shape.drop(r), tuple(c[:r] + c[r + 1 :] for c in M.ones))


def _check_selections(M: BitTensor, selections: Sequence[Sequence[int]]) -> None:
    if len(selections) != M.t:
        raise InvalidArgumentError(f"Expected {M.t} selection lists, got {len(selections)}.")
    for axis, selection in enumerate(selections):
        if not selection:
            raise InvalidArgumentError(f"Selection for axis {axis} is empty.")
        if any(b <= a for a, b in zip(selection, selection[1:])):
            raise InvalidArgumentError(f"Selection for axis {axis} is not strictly increasing.")
        if selection[0] < 0 or selection[-1] >= M.dims[axis]:
            raise InvalidArgumentError(
                f"Selection for axis {axis} leaves the range [0, {M.dims[axis]})."
            )


def subtensor(M: BitTensor, selections: Sequence[Sequence[int]]) -> BitTensor:
    """Submatrix of ``M`` keeping the listed indices on every axis."""
    _check_selections(M, selections)
    positions = [{index: a for a, index in enumerate(sel)} for sel in selections]
    ones = []
    for coord in M.ones:
        try:
            ones.append(tuple(positions[r][i] for r, i in enumerate(coord)))
        except KeyError:
            continue
    return BitTensor(Shape(tuple(len(s) for s in selections)), tuple(ones))


def delete_hyperplane(M: BitTensor, r: int, j: int) -> BitTensor:
    """Remove index ``j`` of axis ``r`` (the remaining indices shift down)."""
    if not 0 <= r < M.t or not 0 <= j < M.dims[r]:
        raise InvalidArgumentError(f"No hyperplane ({r}, {j}) in shape {M.dims}.")
    if M.dims[r] == 1:
        raise InvalidArgumentError(f"Axis {r} has a single index; nothing would remain.")
    dims = M.dims[:r] + (M.dims[r] - 1,) + M.dims[r + 1 :]
    ones = tuple(
        c[:r] + (c[r] - (c[r] > j),) + c[r + 1 :] for c in M.ones if c[r] != j
    )
    return BitTensor(Shape(dims), ones)


def check_enumeration_cap(cells: int, cap: Optional[int] = None) -> None:
    """Raise :class:`ResourceCapError` when ``cells`` exceeds the enumeration cap."""
    limit = config.DEFAULT_CAP_CELLS if cap is None else cap
    if cells > limit:
        raise ResourceCapError("cell enumeration cap", limit, cells, "--cap-cells")


def enumerate_tensors(shape: ShapeLike, cap: Optional[int] = None) -> Iterator[BitTensor]:
    """Yield all ``2^cells`` tensors of ``shape`` exactly once.

    Tensors come in lexicographic order of their bit strings, reading cells in
    lexicographic order (the first cell is the most significant bit).

    Raises:
        ResourceCapError: If the shape has more cells than the cap.
    """
    shape = as_shape(shape)
    check_enumeration_cap(shape.cells, cap)
    cells: List[Coord] = list(iter_cells(shape))
    count = len(cells)
    log.debug(f"Enumerating 2^{count} tensors of shape {shape.dims}")
    for mask in range(1 << count):
        ones = tuple(cells[i] for i in range(count) if mask >> (count - 1 - i) & 1)
        yield BitTensor(shape, ones)


def random_tensor(shape: ShapeLike, density: float, rng: np.random.Generator) -> BitTensor:
    """Seeded random tensor with each cell set independently with probability ``density``."""
    shape = as_shape(shape)
    return from_dense(rng.random(shape.dims) < density)
