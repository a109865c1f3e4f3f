"""
Exact extremal numbers, avoider counts and the constants of the division argument.

``extremal_pattern`` (also exported as ``f_exact``) computes the maximum number
of 1-entries of an ``n x ... x n`` tensor avoiding a pattern by branch and
bound; ``extremal_division`` does the same for tensors without a full
``k x ... x k`` division. Both properties are closed under deleting 1-entries,
which is what the pruning relies on. Counting walks the same tree and stops
descending as soon as the partial tensor contains the pattern.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import sympy

from tensor_extremal import config
from tensor_extremal.containment import avoids
from tensor_extremal.core import (
    BitTensor,
    Coord,
    Shape,
    check_enumeration_cap,
    iter_cells,
    slice_tensor,
    tensor_new,
    zero_tensor,
)
from tensor_extremal.division import contract, find_full_division, uniform_division
from tensor_extremal.exceptions import (
    InvalidArgumentError,
    SearchBudgetExceeded,
    UnsupportedDimensionError,
)
from tensor_extremal.pattern import (
    PatternLike,
    SunflowerSpec,
    as_tensor,
    is_sunflower_with,
    make_pattern,
    sunflower_core,
    validate_pattern,
)

log = logging.getLogger(__name__)

Rational = Union[int, Fraction]


# --- Constants alpha_t(k) ---


def generalized_binomial(x: Rational, j: int) -> Fraction:
    """``x (x-1) ... (x-j+1) / j!`` for a rational ``x``."""
    if j < 0:
        raise InvalidArgumentError(f"Binomial index must be non-negative, got {j}.")
    numerator = Fraction(1)
    for i in range(j):
        numerator *= Fraction(x) - i
    return numerator / math.factorial(j)


def marcus_tardos_base(k: int) -> Fraction:
    """Adopted two-dimensional base constant ``alpha_2(k) = 2 k^4 C(k^2, k)``."""
    return Fraction(2 * k**4 * math.comb(k * k, k))


class AlphaTable:
    """Memoized exact constants ``alpha_t(k)`` built on a replaceable base ``alpha_2``."""

    def __init__(self, base: Callable[[int], Rational] = marcus_tardos_base):
        self.base = base
        self._memo: Dict[Tuple[int, int], Fraction] = {}

    @property
    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return dict(self._memo)

    def alpha(self, t: int, k: int) -> Fraction:
        """Return ``alpha_t(k)`` exactly.

        For ``t >= 3`` this is ``2t(k-1) [C(p-1, k-1)/p]^(t-1)`` with
        ``p = 2^t alpha_{t-1}(k)^t``; ``p`` is rational once ``t >= 4`` and the
        binomial is taken in its generalized form.

        Raises:
            InvalidArgumentError: Unless ``t >= 2`` and ``k >= 2``.
        """
        if t < 2 or k < 2:
            raise InvalidArgumentError(f"alpha needs t >= 2 and k >= 2, got t={t}, k={k}.")
        key = (t, k)
        if key not in self._memo:
            if t == 2:
                value = Fraction(self.base(k))
            else:
                p = 2**t * self.alpha(t - 1, k) ** t
                bracket = generalized_binomial(p - 1, k - 1) / p
                value = 2 * t * (k - 1) * bracket ** (t - 1)
            self._memo[key] = value
        return self._memo[key]


@lru_cache(maxsize=1)
def default_alpha_table() -> AlphaTable:
    """Process-wide table using :func:`marcus_tardos_base`."""
    return AlphaTable()


def alpha(t: int, k: int) -> Fraction:
    return default_alpha_table().alpha(t, k)


@dataclass(frozen=True)
class RecursionStep:
    """One step of the ``c(n, k)`` recursion for a block side ``p``.

    ``additive`` is ``t(k-1) (C(p-1, k-1)/p)^(t-1)``; ``coefficient`` is
    ``2^t alpha_{t-1}(k)^(t/(t-1)) p^(-1/(t-1))`` kept symbolic.
    """

    t: int
    k: int
    p: Fraction
    additive: Fraction
    coefficient: sympy.Expr
    exceeds_half: bool
    default_p: bool

    def as_dict(self) -> Dict[str, object]:
        return {
            "t": self.t,
            "k": self.k,
            "p": str(self.p),
            "additive": str(self.additive),
            "coefficient": str(self.coefficient),
            "coefficient_float": float(self.coefficient.evalf()),
            "exceeds_half": self.exceeds_half,
            "default_p": self.default_p,
        }


def recursion_step(
    t: int, k: int, p: Optional[Rational] = None, table: Optional[AlphaTable] = None
) -> RecursionStep:
    """Evaluate the recursion step, with ``p = (2 alpha_{t-1}(k))^t`` when omitted.

    For the default ``p`` the coefficient simplifies to ``2^(t - t/(t-1))``,
    which is larger than 1/2; ``exceeds_half`` reports this rather than hiding it.

    Raises:
        UnsupportedDimensionError: If ``t < 3``.
        InvalidArgumentError: If ``k < 2`` or ``p <= 0``.
    """
    if t < 3:
        raise UnsupportedDimensionError(f"The recursion runs from t=3 upwards, got t={t}.")
    table = table or default_alpha_table()
    alpha_prev = table.alpha(t - 1, k)
    default_p = p is None
    p_value = (2 * alpha_prev) ** t if p is None else Fraction(p)
    if p_value <= 0:
        raise InvalidArgumentError(f"Block side p must be positive, got {p_value}.")

    additive = t * (k - 1) * (generalized_binomial(p_value - 1, k - 1) / p_value) ** (t - 1)
    exponent = sympy.Rational(t, t - 1)
    if default_p:
        a = sympy.Symbol("alpha", positive=True)
        general = 2**t * a**exponent * ((2 * a) ** t) ** (-sympy.Rational(1, t - 1))
        coefficient = sympy.simplify(sympy.powsimp(sympy.expand_power_base(general, force=True)))
    else:
        coefficient = sympy.simplify(
            sympy.Integer(2) ** t
            * sympy.Rational(alpha_prev.numerator, alpha_prev.denominator) ** exponent
            * sympy.Rational(p_value.numerator, p_value.denominator) ** (-sympy.Rational(1, t - 1))
        )
    exceeds_half = bool(coefficient > sympy.Rational(1, 2))
    if exceeds_half:
        log.info(f"Recursion coefficient {coefficient} at t={t}, k={k} is above 1/2")
    return RecursionStep(t, k, p_value, additive, coefficient, exceeds_half, default_p)


# --- Branch and bound ---


@dataclass(frozen=True)
class SearchReport:
    """Outcome of an extremal search or a count."""

    value: int
    witness: Optional[BitTensor]
    nodes_explored: int
    exact: bool


@dataclass(frozen=True)
class _AvoidsPattern:
    pattern: BitTensor

    def __call__(self, M: BitTensor) -> bool:
        return avoids(M, self.pattern)


@dataclass(frozen=True)
class _NoFullDivision:
    k: int

    def __call__(self, M: BitTensor) -> bool:
        return find_full_division(M, self.k) is None


Admissible = Callable[[BitTensor], bool]


class _BranchAndBound:
    """Depth-first maximization of the ones count over a downward-closed family.

    Cells are decided in lexicographic order, 1 before 0. A branch is cut when
    its ones plus the undecided cells cannot beat the incumbent; the incumbent
    only changes on strict improvement.
    """

    def __init__(self, shape: Shape, admissible: Admissible, incumbent: BitTensor, budget: int):
        self.shape = shape
        self.cells: List[Coord] = list(iter_cells(shape))
        self.admissible = admissible
        self.best = incumbent
        self.best_value = incumbent.ones_count
        self.budget = budget
        self.nodes = 0

    def bound(self, ones: Sequence[Coord], depth: int) -> bool:
        return len(ones) + len(self.cells) - depth <= self.best_value

    def branch(self, ones: List[Coord], depth: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"Branch and bound spent {self.budget} nodes.", self.nodes)
        if self.bound(ones, depth):
            return
        if depth == len(self.cells):
            self.best = BitTensor(self.shape, tuple(ones))
            self.best_value = len(ones)
            log.debug(f"New incumbent with {self.best_value} ones after {self.nodes} nodes")
            return
        ones.append(self.cells[depth])
        if self.admissible(BitTensor(self.shape, tuple(ones))):
            self.branch(ones, depth + 1)
        ones.pop()
        self.branch(ones, depth + 1)

    def run(self, prefix: Sequence[Coord] = (), depth: int = 0) -> SearchReport:
        try:
            self.branch(list(prefix), depth)
            exact = True
        except SearchBudgetExceeded:
            log.warning(
                f"Search budget of {self.budget} nodes exhausted; reporting the lower bound "
                f"{self.best_value}"
            )
            exact = False
        return SearchReport(self.best_value, self.best, self.nodes, exact)


def _prefixes(
    cells: Sequence[Coord], depth: int, admissible: Admissible, shape: Shape, ones_first: bool
) -> List[Tuple[Coord, ...]]:
    """Admissible assignments of the first ``depth`` cells in search order."""
    order = (1, 0) if ones_first else (0, 1)
    found = []
    for bits in itertools.product(order, repeat=depth):
        ones = tuple(cell for cell, bit in zip(cells, bits) if bit)
        if admissible(BitTensor(shape, ones)):
            found.append(ones)
    return found


def _split_depth(threads: int, cells: int) -> int:
    return min(cells, max(1, math.ceil(math.log2(4 * threads))))


SearchTask = Tuple[Shape, Admissible, BitTensor, int, Tuple[Coord, ...], int]


def _subtree_search(task: SearchTask) -> SearchReport:
    shape, admissible, incumbent, budget, prefix, depth = task
    return _BranchAndBound(shape, admissible, incumbent, budget).run(prefix, depth)


def _maximize(
    shape: Shape,
    admissible: Admissible,
    incumbent: BitTensor,
    budget: Optional[int],
    threads: Optional[int],
) -> SearchReport:
    limit = config.DEFAULT_SEARCH_BUDGET if budget is None else budget
    workers = config.DEFAULT_THREADS if threads is None else threads
    if workers <= 1:
        return _BranchAndBound(shape, admissible, incumbent, limit).run()

    # Subtrees run independently from the shared starting incumbent; the merged
    # result is the first subtree (in search order) reaching the maximum.
    depth = _split_depth(workers, shape.cells)
    prefixes = _prefixes(list(iter_cells(shape)), depth, admissible, shape, ones_first=True)
    tasks = [(shape, admissible, incumbent, limit, prefix, depth) for prefix in prefixes]
    log.debug(f"Splitting the search into {len(tasks)} subtrees over {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(_subtree_search, tasks))
    best = SearchReport(incumbent.ones_count, incumbent, 0, True)
    nodes = 0
    for report in reports:
        nodes += report.nodes_explored
        if report.value > best.value:
            best = report
    exact = all(report.exact for report in reports)
    return SearchReport(best.value, best.witness, nodes, exact)


def _pattern_for(P: PatternLike, t: Optional[int]) -> BitTensor:
    P_tensor = as_tensor(P)
    if t is not None and t != P_tensor.t:
        raise InvalidArgumentError(f"Pattern has t={P_tensor.t}, but t={t} was requested.")
    return P_tensor


def _check_order(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}.")


def _staircase(shape: Shape, admissible: Admissible) -> BitTensor:
    """Greedy lexicographic fill: set each cell to 1 whenever that stays admissible."""
    ones: List[Coord] = []
    for cell in iter_cells(shape):
        if admissible(BitTensor(shape, tuple(ones + [cell]))):
            ones.append(cell)
    return BitTensor(shape, tuple(ones))


def extremal_pattern(
    n: int,
    P: PatternLike,
    t: Optional[int] = None,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> SearchReport:
    """Exact ``f_t(n, P)``: the most 1-entries of an ``n x ... x n`` tensor avoiding ``P``.

    The incumbent starts from the greedy staircase when ``t = 2`` and from the
    zero tensor otherwise.

    Args:
        n: Side length.
        P: The forbidden pattern.
        t: Optional check on the pattern's number of axes.
        budget: Branch-and-bound node budget; defaults to the configured one.
        threads: Worker processes for the top-level branches.

    Returns:
        A :class:`SearchReport`; ``exact`` is false when the budget ran out, and
        ``value`` is then the best lower bound found.

    Raises:
        InvalidArgumentError: If ``n < 1``, ``P`` is not a t-pattern or ``t`` disagrees with ``P``.
    """
    _check_order(n)
    P_tensor = _pattern_for(P, t)
    if not validate_pattern(P_tensor):
        raise InvalidArgumentError("Not a t-pattern: two 1-entries differ in exactly one position.")
    shape = Shape.cubic(n, P_tensor.t)
    if any(k > n for k in P_tensor.dims):
        log.debug(f"Pattern {P_tensor.dims} cannot embed at n={n}; the full tensor avoids it")
        full = BitTensor(shape, tuple(iter_cells(shape)))
        return SearchReport(shape.cells, full, 0, True)
    if not P_tensor.ones:
        log.info("A pattern without 1-entries is contained in every tensor it fits; f is 0")
        return SearchReport(0, None, 0, True)
    admissible = _AvoidsPattern(P_tensor)
    incumbent = _staircase(shape, admissible) if shape.t == 2 else zero_tensor(shape)
    return _maximize(shape, admissible, incumbent, budget, threads)


f_exact = extremal_pattern


def extremal_division(
    n: int,
    k: int,
    t: int,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> SearchReport:
    """Exact maximum ones of an ``n x ... x n`` tensor with no full ``k x ... x k`` division."""
    _check_order(n)
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"extremal_division needs 1 <= k <= n, got k={k}, n={n}.")
    shape = Shape.cubic(n, t)
    return _maximize(shape, _NoFullDivision(k), zero_tensor(shape), budget, threads)


# --- Counting avoiders ---


class _AvoiderWalk:
    """Depth-first walk over the tensors of a shape that avoid a pattern.

    Cells are decided in lexicographic order, 0 before 1, so tensors come out in
    the order of :func:`~tensor_extremal.core.enumerate_tensors`.
    """

    def __init__(self, shape: Shape, pattern: BitTensor):
        self.shape = shape
        self.pattern = pattern
        self.cells: List[Coord] = list(iter_cells(shape))

    def admissible(self, ones: Sequence[Coord]) -> bool:
        return avoids(BitTensor(self.shape, tuple(ones)), self.pattern)

    def walk(self, ones: List[Coord], depth: int) -> Iterator[BitTensor]:
        if depth == len(self.cells):
            yield BitTensor(self.shape, tuple(ones))
            return
        yield from self.walk(ones, depth + 1)
        ones.append(self.cells[depth])
        if self.admissible(ones):
            yield from self.walk(ones, depth + 1)
        ones.pop()

    def count(self, ones: List[Coord], depth: int) -> int:
        if depth == len(self.cells):
            return 1
        total = self.count(ones, depth + 1)
        ones.append(self.cells[depth])
        if self.admissible(ones):
            total += self.count(ones, depth + 1)
        ones.pop()
        return total


def _subtree_count(task: Tuple[Shape, BitTensor, Tuple[Coord, ...], int]) -> int:
    shape, pattern, prefix, depth = task
    return _AvoiderWalk(shape, pattern).count(list(prefix), depth)


def iter_avoiders(
    n: int, P: PatternLike, t: Optional[int] = None, cap: Optional[int] = None
) -> Iterator[BitTensor]:
    """Yield every ``n x ... x n`` tensor avoiding ``P``.

    Raises:
        ResourceCapError: If ``n^t`` exceeds the cell enumeration cap.
    """
    _check_order(n)
    P_tensor = _pattern_for(P, t)
    shape = Shape.cubic(n, P_tensor.t)
    check_enumeration_cap(shape.cells, cap)
    walk = _AvoiderWalk(shape, P_tensor)
    if walk.admissible([]):
        yield from walk.walk([], 0)


def count_avoiders(
    n: int,
    P: PatternLike,
    t: Optional[int] = None,
    cap: Optional[int] = None,
    threads: Optional[int] = None,
) -> int:
    """Exact ``|T_t(n, P)|``.

    Raises:
        ResourceCapError: If ``n^t`` exceeds the cell enumeration cap.
    """
    _check_order(n)
    P_tensor = _pattern_for(P, t)
    shape = Shape.cubic(n, P_tensor.t)
    check_enumeration_cap(shape.cells, cap)
    walk = _AvoiderWalk(shape, P_tensor)
    # Only the empty pattern is contained in the zero tensor
    if not walk.admissible([]):
        return 0
    workers = config.DEFAULT_THREADS if threads is None else threads
    if workers <= 1:
        return walk.count([], 0)

    depth = _split_depth(workers, shape.cells)
    prefixes = _prefixes(walk.cells, depth, _AvoidsPattern(P_tensor), shape, ones_first=False)
    tasks = [(shape, P_tensor, prefix, depth) for prefix in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return sum(executor.map(_subtree_count, tasks))


# --- Doubling argument ---


def block_contraction(M: BitTensor) -> BitTensor:
    """Contract ``M`` by its uniform ``2 x ... x 2`` block division.

    Raises:
        InvalidArgumentError: If some dimension is odd.
    """
    return contract(M, uniform_division(M.shape, 2))


@dataclass(frozen=True)
class KlazarCheck:
    lhs: int
    rhs: int
    holds: bool
    f_value: int


def _exact_value(report: SearchReport) -> int:
    if not report.exact:
        raise SearchBudgetExceeded(
            f"f was not determined exactly (lower bound {report.value}).", report.nodes_explored
        )
    return report.value


def klazar_check(
    n: int, P: PatternLike, t: Optional[int] = None, cap: Optional[int] = None
) -> KlazarCheck:
    """Compare ``|T_t(2n, P)|`` with ``|T_t(n, P)| (2^(2^t) - 1)^f_t(n, P)``.

    Raises:
        ResourceCapError: If ``(2n)^t`` exceeds the cell enumeration cap.
    """
    P_tensor = _pattern_for(P, t)
    check_enumeration_cap((2 * n) ** P_tensor.t, cap)
    lhs = count_avoiders(2 * n, P_tensor, cap=cap)
    f_value = _exact_value(extremal_pattern(n, P_tensor))
    rhs = count_avoiders(n, P_tensor, cap=cap) * (2 ** (2**P_tensor.t) - 1) ** f_value
    holds = lhs <= rhs
    if not holds:
        log.warning(f"Doubling inequality fails at n={n}: {lhs} > {rhs}")
    return KlazarCheck(lhs, rhs, holds, f_value)


@dataclass(frozen=True)
class KlazarFiber:
    """Avoiders of side ``2n`` sharing one block contraction."""

    image: BitTensor
    size: int
    bound: int
    image_avoids: bool

    @property
    def holds(self) -> bool:
        return self.image_avoids and self.size <= self.bound


def klazar_fibers(
    n: int, P: PatternLike, t: Optional[int] = None, cap: Optional[int] = None
) -> List[KlazarFiber]:
    """Group the avoiders of side ``2n`` by their block contraction, images in sorted order."""
    P_tensor = _pattern_for(P, t)
    sizes: Counter = Counter(block_contraction(M) for M in iter_avoiders(2 * n, P_tensor, cap=cap))
    per_block = 2 ** (2**P_tensor.t) - 1
    fibers = []
    for image in sorted(sizes, key=lambda image: image.ones):
        fibers.append(
            KlazarFiber(image, sizes[image], per_block**image.ones_count, avoids(image, P_tensor))
        )
    return fibers


# --- Sunflower reduction ---


@dataclass(frozen=True)
class SunflowerReduction:
    """``f_t(n, P) <= n f_{t-1}(n, P')`` where ``P'`` slices ``P`` along a core axis."""

    axis: int
    reduced: BitTensor
    lhs: int
    rhs: int
    holds: bool


def sunflower_reduction_check(
    n: int,
    P: PatternLike,
    spec: Optional[SunflowerSpec] = None,
    budget: Optional[int] = None,
) -> SunflowerReduction:
    """Slice a sunflower pattern along its first core axis and compare both extremal numbers.

    ``spec`` supplies the core explicitly; it is required for single-one
    patterns, whose minimal core is empty.

    Raises:
        InvalidArgumentError: If ``P`` is not a sunflower with the given core or
            the core is empty (``f_exact`` alone covers that case).
    """
    P_tensor = as_tensor(P)
    if spec is None:
        spec = sunflower_core(P_tensor)
        if spec is None:
            raise InvalidArgumentError("Pattern is not a sunflower pattern.")
    elif not is_sunflower_with(P_tensor, spec):
        raise InvalidArgumentError(f"Pattern is not a sunflower with core {sorted(spec.core)}.")
    if not spec.core:
        raise InvalidArgumentError(
            "Sunflower core is empty; compute f_exact directly, no slice reduction applies."
        )
    if P_tensor.t < 2:
        raise UnsupportedDimensionError("Slice reduction needs t >= 2.")
    axis = min(spec.core)
    reduced = slice_tensor(P_tensor, axis, spec.core_values[axis])
    lhs = _exact_value(extremal_pattern(n, P_tensor, budget=budget))
    rhs = n * _exact_value(extremal_pattern(n, reduced, budget=budget))
    holds = lhs <= rhs
    if not holds:
        log.warning(f"Sunflower reduction fails at n={n}: {lhs} > {rhs}")
    return SunflowerReduction(axis, reduced, lhs, rhs, holds)


def sunflower_patterns(t: int, max_side: int, max_petals: int) -> Iterator[PatternLike]:
    """Every t-pattern of side <= ``max_side`` with 2..``max_petals`` ones and a non-empty core."""
    for dims in itertools.product(range(1, max_side + 1), repeat=t):
        shape = Shape(dims)
        cells = list(iter_cells(shape))
        for count in range(2, max_petals + 1):
            for ones in itertools.combinations(cells, count):
                M = tensor_new(shape, ones)
                if not validate_pattern(M):
                    continue
                spec = sunflower_core(M)
                if spec is not None and spec.core:
                    yield make_pattern(M)
