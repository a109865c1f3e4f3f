"""
Divisions, contractions and full-division detection.

A division splits every axis into consecutive non-empty intervals. It is stored
as one strictly increasing tuple of cut positions per axis: a cut at ``c``
starts a new interval at index ``c``. Contracting a tensor by a division marks
the cells that hold at least one 1; a division is full when every cell does.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from tensor_extremal import config
from tensor_extremal.constants import DENSE_CELL_LIMIT, EXACT_PIGEONHOLE_MAX_SIDE
from tensor_extremal.core import (
    BitTensor,
    Coord,
    Shape,
    ShapeLike,
    as_shape,
    from_dense,
    iter_cells,
    smash,
)
from tensor_extremal.exceptions import (
    InvalidArgumentError,
    InvariantViolation,
    ResourceCapError,
    UnsupportedDimensionError,
)

if TYPE_CHECKING:
    from tensor_extremal.extremal import AlphaTable

log = logging.getLogger(__name__)

Cuts = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Division:
    """One tuple of interval cut positions per axis."""

    cuts: Cuts

    def __post_init__(self) -> None:
        object.__setattr__(self, "cuts", tuple(tuple(int(c) for c in axis) for axis in self.cuts))

    @property
    def t(self) -> int:
        return len(self.cuts)

    @property
    def parts(self) -> Tuple[int, ...]:
        """Number of intervals ``(k_1, ..., k_t)`` on each axis."""
        return tuple(len(axis) + 1 for axis in self.cuts)

    def as_lists(self) -> List[List[int]]:
        return [list(axis) for axis in self.cuts]


def validate_division(D: Division, shape: ShapeLike) -> None:
    """Raise :class:`InvalidArgumentError` unless ``D`` partitions every axis of ``shape``."""
    shape = as_shape(shape)
    if D.t != shape.t:
        raise InvalidArgumentError(f"Division has {D.t} axes, shape has {shape.t}.")
    for axis, (cuts, size) in enumerate(zip(D.cuts, shape.dims)):
        previous = 0
        for cut in cuts:
            if not previous < cut < size:
                raise InvalidArgumentError(
                    f"Cuts {list(cuts)} on axis {axis} do not split [0, {size}) into "
                    f"non-empty ordered intervals."
                )
            previous = cut


def intervals(D: Division, shape: ShapeLike) -> List[List[Tuple[int, int]]]:
    """Half-open ``(start, stop)`` intervals of every axis."""
    shape = as_shape(shape)
    validate_division(D, shape)
    spans = []
    for cuts, size in zip(D.cuts, shape.dims):
        bounds = (0,) + cuts + (size,)
        spans.append(list(zip(bounds, bounds[1:])))
    return spans


def cell_of(D: Division, coord: Sequence[int]) -> Coord:
    """Index of the cell holding ``coord``."""
    return tuple(bisect.bisect_right(cuts, i) for cuts, i in zip(D.cuts, coord))


def _check_k(shape: Shape, k: int) -> None:
    if not 1 <= k <= min(shape.dims):
        raise InvalidArgumentError(
            f"k={k} must lie in [1, {min(shape.dims)}] for shape {shape.dims}."
        )


def enumerate_divisions(shape: ShapeLike, k: int) -> Iterator[Division]:
    """Every ``k x ... x k`` division of ``shape``, in lexicographic order of the cuts."""
    shape = as_shape(shape)
    _check_k(shape, k)
    per_axis = [list(itertools.combinations(range(1, n), k - 1)) for n in shape.dims]
    for cuts in itertools.product(*per_axis):
        yield Division(cuts)


def count_divisions(p: int, k: int, t: int) -> int:
    """Number of ``k x ... x k`` divisions of a ``p x ... x p`` matrix: ``C(p-1, k-1)^t``."""
    if not 1 <= k <= p:
        raise InvalidArgumentError(f"count_divisions needs 1 <= k <= p, got k={k}, p={p}.")
    return math.comb(p - 1, k - 1) ** t


def division_total(shape: ShapeLike, k: int) -> int:
    """Number of ``k x ... x k`` divisions of an arbitrary shape."""
    shape = as_shape(shape)
    _check_k(shape, k)
    return math.prod(math.comb(n - 1, k - 1) for n in shape.dims)


def contract(M: BitTensor, D: Division) -> BitTensor:
    """The contraction ``M / D``: 1 exactly where a cell holds a 1.

    Raises:
        InvalidArgumentError: If ``D`` does not fit ``M``'s shape.
    """
    validate_division(D, M.shape)
    if M.shape.cells > DENSE_CELL_LIMIT:
        return BitTensor(Shape(D.parts), tuple(cell_of(D, c) for c in M.ones))
    cells = M.dense
    for r, cuts in enumerate(D.cuts):
        cells = np.logical_or.reduceat(cells, (0,) + cuts, axis=r)
    return from_dense(cells)


def is_full(M: BitTensor, D: Division) -> bool:
    """True iff every cell of ``M`` under ``D`` holds a 1."""
    return contract(M, D).ones_count == math.prod(D.parts)


def compose(D: Division, inner: Division) -> Division:
    """Division of the original axes equivalent to contracting by ``D`` then by ``inner``."""
    if inner.t != D.t:
        raise InvalidArgumentError("Composed divisions need the same number of axes.")
    composed = []
    for outer_cuts, inner_cuts in zip(D.cuts, inner.cuts):
        composed.append(tuple(outer_cuts[c - 1] for c in inner_cuts))
    return Division(tuple(composed))


def find_full_division(
    M: BitTensor, k: int, cap: Optional[int] = None
) -> Optional[Division]:
    """Lexicographically least full ``k x ... x k`` division of ``M``, if any.

    Raises:
        InvalidArgumentError: If ``k`` exceeds the smallest dimension.
        ResourceCapError: If more divisions exist than the division cap allows.
    """
    _check_k(M.shape, k)
    if M.ones_count < k**M.t:
        return None
    limit = config.DEFAULT_DIVISION_CAP if cap is None else cap
    total = division_total(M.shape, k)
    if total > limit:
        raise ResourceCapError("division enumeration cap", limit, total, "--cap-divisions")
    for D in enumerate_divisions(M.shape, k):
        if is_full(M, D):
            return D
    return None


def full_division_set(M: BitTensor, k: int, cap: Optional[int] = None) -> List[Division]:
    """Every full ``k x ... x k`` division of ``M`` (exhaustive)."""
    _check_k(M.shape, k)
    if M.ones_count < k**M.t:
        return []
    limit = config.DEFAULT_DIVISION_CAP if cap is None else cap
    total = division_total(M.shape, k)
    if total > limit:
        raise ResourceCapError("division enumeration cap", limit, total, "--cap-divisions")
    return [D for D in enumerate_divisions(M.shape, k) if is_full(M, D)]


def is_heavy(M: BitTensor, k: int, table: Optional["AlphaTable"] = None) -> bool:
    """True iff the cubic ``s``-dimensional ``M`` has more than ``alpha_s(k) n^(s-1)`` ones."""
    from tensor_extremal.extremal import default_alpha_table  # Defer import

    if M.t < 2 or not M.is_cubic():
        raise InvalidArgumentError(f"Heaviness needs a cubic tensor with t >= 2, got {M.dims}.")
    alpha = (table or default_alpha_table()).alpha(M.t, k)
    n = M.dims[0]
    return Fraction(M.ones_count) > alpha * n ** (M.t - 1)


def uniform_division(shape: ShapeLike, block: int) -> Division:
    """Split every axis into consecutive intervals of length ``block``."""
    shape = as_shape(shape)
    if block < 1 or any(n % block for n in shape.dims):
        raise InvalidArgumentError(f"Block size {block} does not divide shape {shape.dims}.")
    return Division(tuple(tuple(range(block, n, block)) for n in shape.dims))


def split_blocks(M: BitTensor, p: int) -> Dict[Coord, BitTensor]:
    """The ``p x ... x p`` blocks of ``M`` keyed by their block-index tuple."""
    D = uniform_division(M.shape, p)
    grouped: Dict[Coord, List[Coord]] = {cell: [] for cell in iter_cells(D.parts)}
    for coord in M.ones:
        grouped[cell_of(D, coord)].append(tuple(i % p for i in coord))
    block_shape = Shape.cubic(p, M.t)
    return {cell: BitTensor(block_shape, tuple(ones)) for cell, ones in grouped.items()}


def _check_block_family(blocks: Sequence[BitTensor], r: int) -> int:
    if not blocks:
        raise InvalidArgumentError("The block family is empty.")
    first = blocks[0]
    if first.t < 2:
        raise UnsupportedDimensionError("Blocks need t >= 2 to be smashed.")
    if not first.is_cubic() or any(b.shape != first.shape for b in blocks):
        raise InvalidArgumentError("All blocks must be cubic and share one shape.")
    if not 0 <= r < first.t:
        raise InvalidArgumentError(f"Axis {r} out of range for t={first.t}.")
    return first.dims[0]


def stack_blocks(blocks: Sequence[BitTensor], r: int) -> BitTensor:
    """Concatenate equal cubic blocks along axis ``r``."""
    p = _check_block_family(blocks, r)
    t = blocks[0].t
    dims = tuple(len(blocks) * p if axis == r else p for axis in range(t))
    ones = []
    for c, block in enumerate(blocks):
        for coord in block.ones:
            ones.append(coord[:r] + (coord[r] + c * p,) + coord[r + 1 :])
    return BitTensor(Shape(dims), tuple(ones))


def _lift(smash_division: Division, r: int, block_indices: Sequence[int], p: int) -> Division:
    axis_r = tuple(c * p for c in block_indices[1:])
    cuts = smash_division.cuts
    return Division(cuts[:r] + (axis_r,) + cuts[r:])


def shared_division_counts(
    blocks: Sequence[BitTensor], r: int, k: int
) -> Tuple[Counter, int]:
    """For each ``(t-1)``-division, how many block smashes it divides fully.

    Returns:
        The counter of divisions and the number of blocks whose smash admits at
        least one full division.
    """
    _check_block_family(blocks, r)
    shares: Counter = Counter()
    with_full = 0
    for block in blocks:
        found = full_division_set(smash(block, r), k)
        if found:
            with_full += 1
        shares.update(found)
    return shares, with_full


def extract_full_division_pigeonhole(
    blocks: Sequence[BitTensor], r: int, k: int
) -> Optional[Tuple[Division, Tuple[int, ...]]]:
    """Full division of the stacked blocks built from a division shared by ``k`` smashes.

    Every block's ``r``-th smash is searched for full ``(t-1)``-dimensional
    divisions: all of them for small blocks, only the least one otherwise. When
    some division is shared by at least ``k`` blocks, the first ``k`` of those
    blocks give the intervals on axis ``r`` and the shared division the others.

    Returns:
        The lifted division of ``stack_blocks(blocks, r)`` and the chosen block
        indices, or ``None`` when no division is shared often enough.

    Raises:
        InvariantViolation: If the lifted division is not full.
    """
    p = _check_block_family(blocks, r)
    if k > p:
        return None
    exhaustive = p <= EXACT_PIGEONHOLE_MAX_SIDE
    holders: Dict[Division, List[int]] = {}
    for index, block in enumerate(blocks):
        projected = smash(block, r)
        if exhaustive:
            found = full_division_set(projected, k)
        else:
            least = find_full_division(projected, k)
            found = [least] if least is not None else []
        for D in found:
            holders.setdefault(D, []).append(index)

    shared = [D for D, owners in holders.items() if len(owners) >= k]
    if not shared:
        log.debug(f"No division shared by {k} of {len(blocks)} blocks (exhaustive={exhaustive})")
        return None
    chosen = min(shared, key=lambda D: D.cuts)
    block_indices = tuple(holders[chosen][:k])
    lifted = _lift(chosen, r, block_indices, p)
    if not is_full(stack_blocks(blocks, r), lifted):
        raise InvariantViolation(f"Lifted division {lifted.cuts} is not full.")
    return lifted, block_indices


def pigeonhole_threshold(p: int, k: int, t: int) -> int:
    """Heavy-block count that forces a shared division: ``(k-1) C(p-1, k-1)^(t-1)``."""
    return (k - 1) * count_divisions(p, k, t - 1)


@dataclass(frozen=True)
class BlockClassification:
    """Blocks of a cubic matrix sorted by the directions in which they are heavy."""

    heavy: Dict[int, List[Coord]] = field(default_factory=dict)
    light: List[Coord] = field(default_factory=list)
    light_bound_holds: bool = True


def light_block_bound_holds(ones: int, alpha: Fraction, p: int, t: int) -> bool:
    """``ones <= 2^t (alpha p^(t-2))^(t/(t-1))`` in cross-multiplied exact form."""
    return Fraction(ones) ** (t - 1) <= Fraction(2) ** (t * (t - 1)) * (alpha * p ** (t - 2)) ** t


def classify_blocks(
    M: BitTensor, p: int, k: int, table: Optional["AlphaTable"] = None
) -> BlockClassification:
    """Split ``M`` into ``p``-blocks and record which smashes are ``k``-heavy.

    ``heavy[r]`` lists the blocks whose ``r``-th smash is heavy; ``light`` lists the
    non-empty blocks heavy in no direction, each of which must respect the
    entry bound derived from the smash counts.
    """
    from tensor_extremal.extremal import default_alpha_table  # Defer import

    if M.t < 3 or not M.is_cubic():
        raise UnsupportedDimensionError("Block classification needs a cubic tensor with t >= 3.")
    table = table or default_alpha_table()
    alpha = table.alpha(M.t - 1, k)
    heavy: Dict[int, List[Coord]] = {r: [] for r in range(M.t)}
    light: List[Coord] = []
    holds = True
    for index, block in split_blocks(M, p).items():
        if not block.ones:
            continue
        directions = [r for r in range(M.t) if is_heavy(smash(block, r), k, table)]
        for r in directions:
            heavy[r].append(index)
        if not directions:
            light.append(index)
            if not light_block_bound_holds(block.ones_count, alpha, p, M.t):
                log.warning(f"Light block {index} breaks the entry bound")
                holds = False
    return BlockClassification(heavy, light, holds)
