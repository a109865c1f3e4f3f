"""
Validation, classification and construction of t-patterns.

A t-pattern is a 0-1 tensor whose 1-entries pairwise differ in at least two
positions. Patterns are classified as free (at most one 1 per slice),
permutations (exactly one per slice), Latin (recursively, every slice Latin)
and sunflower (1-entries agree on a fixed core of axes and pairwise differ
everywhere else).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Union

from tensor_extremal.core import BitTensor, Shape, slice_tensor, tensor_new
from tensor_extremal.exceptions import InvalidArgumentError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SunflowerSpec:
    """Core axes ``S`` of a sunflower pattern and the fixed index ``c_s`` on each."""

    core: FrozenSet[int] = frozenset()
    core_values: Mapping[int, int] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "core", frozenset(self.core))
        object.__setattr__(self, "core_values", dict(self.core_values))
        if set(self.core_values) != set(self.core):
            raise InvalidArgumentError(
                f"Core {sorted(self.core)} and core values {dict(self.core_values)} disagree."
            )


@dataclass(frozen=True)
class Pattern:
    """A validated t-pattern with its classification."""

    tensor: BitTensor
    is_free: bool
    is_permutation: bool
    is_latin: bool
    sunflower: Optional[SunflowerSpec]

    @property
    def t(self) -> int:
        return self.tensor.t

    @property
    def dims(self) -> tuple:
        return self.tensor.dims


PatternLike = Union[Pattern, BitTensor]


def as_tensor(P: PatternLike) -> BitTensor:
    return P.tensor if isinstance(P, Pattern) else P


def _differing_positions(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def validate_pattern(M: BitTensor) -> bool:
    """True iff every pair of distinct 1-coordinates differs in at least two positions."""
    return all(_differing_positions(a, b) >= 2 for a, b in itertools.combinations(M.ones, 2))


def _axis_values_distinct(M: BitTensor, axis: int) -> bool:
    values = [c[axis] for c in M.ones]
    return len(values) == len(set(values))


def is_free(P: PatternLike) -> bool:
    """True iff every slice holds at most one 1."""
    M = as_tensor(P)
    return all(_axis_values_distinct(M, r) for r in range(M.t))


def is_permutation(P: PatternLike) -> bool:
    """True iff the pattern is cubic and every slice holds exactly one 1."""
    M = as_tensor(P)
    if M.t < 2:
        log.debug(f"Not a permutation: t={M.t}, slices need t >= 2.")
        return False
    if not M.is_cubic():
        log.debug(f"Not a permutation: shape {M.dims} is not cubic.")
        return False
    return M.ones_count == M.dims[0] and is_free(M)


def is_latin(M: PatternLike) -> bool:
    """Recursive Latin test: permutation matrices at t=2, Latin slices above.

    A Latin matrix of order n has exactly n^(t-1) ones; that count is checked first.
    """
    M = as_tensor(M)
    if M.t < 2:
        log.debug(f"Not Latin: t={M.t}, the definition starts at t=2.")
        return False
    if not M.is_cubic():
        log.debug(f"Not Latin: shape {M.dims} is not cubic.")
        return False
    n = M.dims[0]
    if M.ones_count != n ** (M.t - 1):
        return False
    if M.t == 2:
        return is_permutation(M)
    return all(is_latin(slice_tensor(M, r, j)) for r in range(M.t) for j in range(n))


def is_sunflower_with(P: PatternLike, spec: SunflowerSpec) -> bool:
    """Check the sunflower condition for an explicitly supplied core."""
    M = as_tensor(P)
    if any(not 0 <= s < M.t for s in spec.core):
        return False
    for coord in M.ones:
        if any(coord[s] != c for s, c in spec.core_values.items()):
            return False
    outside = [r for r in range(M.t) if r not in spec.core]
    return all(
        all(a[r] != b[r] for r in outside) for a, b in itertools.combinations(M.ones, 2)
    )


def sunflower_core(P: PatternLike) -> Optional[SunflowerSpec]:
    """Inclusion-minimal sunflower core, or ``None`` if the pattern is no sunflower.

    With fewer than two ones the condition is vacuous and the empty core is
    reported. Otherwise the core is forced: it is the set of axes on which all
    ones agree, and every other axis must carry pairwise distinct values.
    """
    M = as_tensor(P)
    if M.ones_count < 2:
        return SunflowerSpec()
    core: Dict[int, int] = {}
    for r in range(M.t):
        values = {c[r] for c in M.ones}
        if len(values) == 1:
            core[r] = next(iter(values))
        elif len(values) != M.ones_count:
            return None
    return SunflowerSpec(frozenset(core), core)


def make_pattern(M: BitTensor) -> Pattern:
    """Validate ``M`` as a t-pattern and classify it.

    Raises:
        InvalidArgumentError: If two 1-entries differ in exactly one position.
    """
    if not validate_pattern(M):
        raise InvalidArgumentError(
            "Not a t-pattern: two 1-entries differ in exactly one position."
        )
    return Pattern(
        tensor=M,
        is_free=is_free(M),
        is_permutation=is_permutation(M),
        is_latin=is_latin(M),
        sunflower=sunflower_core(M),
    )


def make_identity(t: int, k: int) -> Pattern:
    """The ``k x ... x k`` pattern with ones at ``(i, ..., i)``."""
    if t < 2 or k < 1:
        raise InvalidArgumentError(f"make_identity needs t >= 2 and k >= 1, got t={t}, k={k}.")
    return make_pattern(tensor_new(Shape.cubic(k, t), [(i,) * t for i in range(k)]))


def make_cyclic_latin(n: int, t: int) -> BitTensor:
    """Latin matrix with ones where the coordinates sum to 0 modulo ``n``."""
    if n < 1 or t < 2:
        raise InvalidArgumentError(f"make_cyclic_latin needs n >= 1 and t >= 2, got n={n}, t={t}.")
    ones = []
    for prefix in itertools.product(range(n), repeat=t - 1):
        ones.append(prefix + ((-sum(prefix)) % n,))
    return tensor_new(Shape.cubic(n, t), ones)


def make_sunflower(
    t: int, core: SunflowerSpec, petal_count: int, dims: Sequence[int]
) -> Pattern:
    """Sunflower pattern with ``petal_count`` ones placed diagonally off the core.

    The j-th one carries ``c_s`` on every core axis and index ``j`` on every other axis.

    Raises:
        InvalidArgumentError: If the dimensions cannot host the requested petals.
    """
    if len(dims) != t:
        raise InvalidArgumentError(f"Expected {t} dimensions, got {len(dims)}.")
    for s, c in core.core_values.items():
        if not 0 <= s < t or not 0 <= c < dims[s]:
            raise InvalidArgumentError(f"Core value c_{s}={c} does not fit shape {tuple(dims)}.")
    petal_axes = [r for r in range(t) if r not in core.core]
    if petal_count < 0:
        raise InvalidArgumentError("petal_count must be non-negative.")
    if petal_count > 1 and len(petal_axes) < 2:
        raise InvalidArgumentError(
            "Two or more petals need at least two non-core axes to differ in two positions."
        )
    for r in petal_axes:
        if petal_count > dims[r]:
            raise InvalidArgumentError(
                f"{petal_count} petals do not fit axis {r} of size {dims[r]}."
            )
    ones = []
    for j in range(petal_count):
        ones.append(tuple(core.core_values[r] if r in core.core else j for r in range(t)))
    return make_pattern(tensor_new(Shape(tuple(dims)), ones))


def classification_report(M: BitTensor) -> Dict[str, Any]:
    """JSON-ready classification of ``M`` used by the ``classify`` subcommand."""
    valid = validate_pattern(M)
    diagnostics: List[str] = []
    if not M.is_cubic():
        diagnostics.append(f"shape {list(M.dims)} is not cubic: not a permutation or Latin matrix")
    spec = sunflower_core(M) if valid else None
    return {
        "valid": valid,
        "free": valid and is_free(M),
        "permutation": valid and is_permutation(M),
        "latin": valid and is_latin(M),
        "sunflower_core": sorted(spec.core) if spec is not None else None,
        "core_values": (
            {str(s): c for s, c in sorted(spec.core_values.items())} if spec is not None else None
        ),
        "diagnostics": diagnostics,
    }
