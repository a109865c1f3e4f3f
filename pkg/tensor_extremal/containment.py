"""
Containment and avoidance of t-patterns.

``M`` contains ``P`` when strictly increasing index lists, one per axis, select
a submatrix of ``M`` that is 1 wherever ``P`` is 1. The search fixes the
selected indices axis by axis and prunes as soon as a 1 of ``P`` has a
coordinate prefix that no 1 of ``M`` starts with.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Iterator, List, Optional, Sequence, Tuple

from tensor_extremal import config
from tensor_extremal.constants import DENSE_CELL_LIMIT
from tensor_extremal.core import BitTensor, Coord, subtensor
from tensor_extremal.exceptions import InvalidArgumentError, SearchBudgetExceeded
from tensor_extremal.pattern import PatternLike, as_tensor, is_free

if TYPE_CHECKING:
    from tensor_extremal.division import Division

log = logging.getLogger(__name__)

Selections = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Embedding:
    """One strictly increasing index list per axis, sized like the pattern."""

    selections: Selections

    def as_lists(self) -> List[List[int]]:
        return [list(s) for s in self.selections]


@dataclass(frozen=True)
class EmbeddingSearch:
    """Outcome of an instrumented containment search."""

    embedding: Optional[Embedding]
    nodes: int

    @property
    def contains(self) -> bool:
        return self.embedding is not None


def _check_dimensions(M: BitTensor, P: BitTensor) -> None:
    if M.t != P.t:
        raise InvalidArgumentError(
            f"Dimension count mismatch: matrix has t={M.t}, pattern has t={P.t}."
        )


def fits(M: BitTensor, P: PatternLike) -> bool:
    """True iff every pattern dimension is at most the matching matrix dimension."""
    P_tensor = as_tensor(P)
    return all(k <= n for k, n in zip(P_tensor.dims, M.dims))


def _prefix_occupancy(M: BitTensor) -> Callable[[int, Coord], bool]:
    """Test whether some 1 of ``M`` starts with a coordinate prefix of length ``r + 1``.

    Small shapes answer from projections of the dense view, larger ones from
    sets of prefixes of the 1-coordinates.
    """
    t = M.t
    if M.shape.cells <= DENSE_CELL_LIMIT:
        dense = M.dense
        tables = [dense.any(axis=tuple(range(r + 1, t))) for r in range(t - 1)] + [dense]
        return lambda r, prefix: bool(tables[r][prefix])
    prefixes = [frozenset(c[: r + 1] for c in M.ones) for r in range(t)]
    return lambda r, prefix: prefix in prefixes[r]


def search_embedding(
    M: BitTensor, P: PatternLike, budget: Optional[int] = None
) -> EmbeddingSearch:
    """Depth-first search for an embedding of ``P`` into ``M``.

    Selections are assigned axis by axis, each index list in increasing order,
    so the witness returned is the lexicographically least one.

    Args:
        M: The host tensor.
        P: The pattern (a :class:`Pattern` or a bare tensor).
        budget: Maximum number of search nodes; defaults to the configured budget.

    Returns:
        The embedding (or ``None``) and the number of nodes explored.

    Raises:
        InvalidArgumentError: If ``M`` and ``P`` have different numbers of axes.
        SearchBudgetExceeded: If the budget runs out before an answer is known.
    """
    P_tensor = as_tensor(P)
    _check_dimensions(M, P_tensor)
    if not fits(M, P_tensor):
        return EmbeddingSearch(None, 0)
    limit = config.DEFAULT_NODE_BUDGET if budget is None else budget

    t = M.t
    k = P_tensor.dims
    n = M.dims
    slots = [(r, a) for r in range(t) for a in range(k[r])]
    # Pattern 1s whose coordinate prefix becomes known once slot (r, a) is set
    closing = {slot: [one for one in P_tensor.ones if one[slot[0]] == slot[1]] for slot in slots}
    occupied = _prefix_occupancy(M)
    chosen: List[List[int]] = [[0] * k[r] for r in range(t)]
    nodes = 0

    def consistent(r: int, a: int) -> bool:
        for one in closing[(r, a)]:
            if not occupied(r, tuple(chosen[s][one[s]] for s in range(r + 1))):
                return False
        return True

    def place(depth: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise SearchBudgetExceeded(
                f"Containment search exceeded {limit} nodes; result unknown.", nodes
            )
        if depth == len(slots):
            return True
        r, a = slots[depth]
        lo = chosen[r][a - 1] + 1 if a else 0
        for value in range(lo, n[r] - k[r] + a + 1):
            chosen[r][a] = value
            if consistent(r, a) and place(depth + 1):
                return True
        return False

    if place(0):
        embedding = Embedding(tuple(tuple(axis) for axis in chosen))
        log.debug(f"Embedding found after {nodes} nodes: {embedding.selections}")
        return EmbeddingSearch(embedding, nodes)
    log.debug(f"No embedding after {nodes} nodes")
    return EmbeddingSearch(None, nodes)


def find_embedding(
    M: BitTensor, P: PatternLike, budget: Optional[int] = None
) -> Optional[Embedding]:
    """Return a witness embedding of ``P`` into ``M``, or ``None`` if ``M`` avoids ``P``."""
    return search_embedding(M, P, budget).embedding


def avoids(M: BitTensor, P: PatternLike, budget: Optional[int] = None) -> bool:
    """True iff ``M`` has no submatrix dominating ``P``."""
    return search_embedding(M, P, budget).embedding is None


def is_witness(M: BitTensor, P: PatternLike, selections: Sequence[Sequence[int]]) -> bool:
    """Independent check that ``selections`` picks a submatrix of ``M`` dominating ``P``."""
    P_tensor = as_tensor(P)
    if tuple(len(s) for s in selections) != P_tensor.dims:
        return False
    return P_tensor.one_set <= subtensor(M, selections).one_set


def brute_force_embeddings(M: BitTensor, P: PatternLike) -> Iterator[Selections]:
    """Every selection tuple whose submatrix dominates ``P`` (exhaustive oracle)."""
    P_tensor = as_tensor(P)
    _check_dimensions(M, P_tensor)
    if not fits(M, P_tensor):
        return
    choices = [itertools.combinations(range(n), k) for n, k in zip(M.dims, P_tensor.dims)]
    for selections in itertools.product(*choices):
        if all(
            tuple(selections[r][a] for r, a in enumerate(coord)) in M.one_set
            for coord in P_tensor.ones
        ):
            yield tuple(selections)


def embedding_from_full_division(M: BitTensor, D: "Division", P: PatternLike) -> Embedding:
    """Embed a free pattern using a full division of ``M`` with one interval per pattern index.

    Each 1 of ``P`` is sent to the lexicographically least 1 of ``M`` in the
    corresponding cell; pattern indices without a 1 take the start of their interval.

    Raises:
        InvalidArgumentError: If ``P`` is not free or the division does not match its shape.
    """
    from tensor_extremal.division import cell_of, intervals

    P_tensor = as_tensor(P)
    _check_dimensions(M, P_tensor)
    if not is_free(P_tensor):
        raise InvalidArgumentError("Only free patterns embed through a full division.")
    spans = intervals(D, M.shape)
    if tuple(len(s) for s in spans) != P_tensor.dims:
        raise InvalidArgumentError(
            f"Division has {tuple(len(s) for s in spans)} parts, pattern shape is {P_tensor.dims}."
        )
    first_in_cell = {}
    for coord in M.ones:
        first_in_cell.setdefault(cell_of(D, coord), coord)

    selections = [[start for start, _ in axis_spans] for axis_spans in spans]
    for target in P_tensor.ones:
        chosen = first_in_cell.get(tuple(target))
        if chosen is None:
            raise InvalidArgumentError(f"Cell {target} of the division is empty; it is not full.")
        for r, a in enumerate(target):
            selections[r][a] = chosen[r]
    return Embedding(tuple(tuple(s) for s in selections))
