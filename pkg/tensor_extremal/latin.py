"""
Enumeration of t-dimensional Latin matrices.

A t-dimensional Latin matrix of order n has exactly one 1 on every
axis-parallel line. Its 1-entries are the graph of a map
``L: [n]^(t-1) -> [n]`` that is a bijection along every line of ``[n]^(t-1)``,
so the enumeration fills ``L`` cell by cell in lexicographic order and keeps,
for each line through the current cell, the set of values already used on it.
"""

import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from tensor_extremal.constants import LATIN_REACH
from tensor_extremal.containment import avoids
from tensor_extremal.core import BitTensor, Coord, Shape
from tensor_extremal.exceptions import InvalidArgumentError, ResourceCapError
from tensor_extremal.pattern import PatternLike

log = logging.getLogger(__name__)

LineKey = Tuple[int, Coord]


def latin_reach(t: int) -> int:
    """Largest order enumerated for ``t`` without an explicit override."""
    return LATIN_REACH.get(t, 1)


def _check_reach(n: int, t: int, reach: Optional[int]) -> None:
    if t < 2 or n < 1:
        raise InvalidArgumentError(f"Latin matrices need t >= 2 and n >= 1, got t={t}, n={n}.")
    default = latin_reach(t)
    limit = default if reach is None else reach
    if reach is not None and reach > default:
        log.warning(
            f"Latin enumeration reach raised from {default} to {reach} for t={t}; "
            f"this may run for a very long time"
        )
    if n > limit:
        raise ResourceCapError(f"Latin enumeration reach for t={t}", limit, n, "--latin-reach")


def latin_enumerate(n: int, t: int, reach: Optional[int] = None) -> Iterator[BitTensor]:
    """Yield every t-dimensional Latin matrix of order ``n`` exactly once.

    Args:
        n: Order of the matrices.
        t: Number of axes, at least 2.
        reach: Override of the largest order allowed for this ``t``.

    Raises:
        ResourceCapError: If ``n`` lies beyond the enumeration reach.
    """
    _check_reach(n, t, reach)
    shape = Shape.cubic(n, t)
    cells: List[Coord] = list(itertools.product(range(n), repeat=t - 1))
    used: Dict[LineKey, Set[int]] = {}
    values: List[int] = []

    def lines(cell: Coord) -> List[LineKey]:
        return [(r, cell[:r] + cell[r + 1 :]) for r in range(t - 1)]

    def fill(depth: int) -> Iterator[BitTensor]:
        if depth == len(cells):
            yield BitTensor(shape, tuple(c + (v,) for c, v in zip(cells, values)))
            return
        keys = lines(cells[depth])
        for v in range(n):
            if any(v in used.get(key, ()) for key in keys):
                continue
            for key in keys:
                used.setdefault(key, set()).add(v)
            values.append(v)
            yield from fill(depth + 1)
            values.pop()
            for key in keys:
                used[key].discard(v)

    count = 0
    for M in fill(0):
        count += 1
        yield M
    log.debug(f"Enumerated {count} Latin matrices of order {n} with t={t}")


def latin_count(n: int, t: int, reach: Optional[int] = None) -> int:
    return sum(1 for _ in latin_enumerate(n, t, reach))


def latin_count_avoiders(
    n: int, t: int, P: PatternLike, reach: Optional[int] = None
) -> int:
    """Number of t-dimensional Latin matrices of order ``n`` that avoid ``P``."""
    return sum(1 for M in latin_enumerate(n, t, reach) if avoids(M, P))


def latin_squares_brute_force(n: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """All Latin squares of order ``n``, stacked from row permutations with distinct columns."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}.")
    rows = list(itertools.permutations(range(n)))
    squares: List[Tuple[Tuple[int, ...], ...]] = []

    def stack(chosen: List[Tuple[int, ...]]) -> None:
        if len(chosen) == n:
            squares.append(tuple(chosen))
            return
        for row in rows:
            if all(row[j] != other[j] for other in chosen for j in range(n)):
                stack(chosen + [row])

    stack([])
    return squares


def latin_square_to_tensor(square: Sequence[Sequence[int]]) -> BitTensor:
    """The 3-dimensional Latin matrix with a 1 at ``(i, j, square[i][j])``."""
    n = len(square)
    return BitTensor(
        Shape.cubic(n, 3), tuple((i, j, square[i][j]) for i in range(n) for j in range(n))
    )
