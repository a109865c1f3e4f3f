"""
Face counts of t-colorable complexes, Turán binomials and shadow bounds.

The 1-entries of a t-dimensional matrix are the maximal faces
``{(1, i_1), ..., (t, i_t)}`` of a t-colorable simplicial complex; its i-faces
are the distinct projections of the 1-entries onto i-element axis sets. The
shadow bound limits the number of (k+1)-faces in terms of the cascade
representation of the number of k-faces by Turán binomials.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from tensor_extremal.core import BitTensor, smash
from tensor_extremal.exceptions import (
    InvalidArgumentError,
    InvariantViolation,
    UnsupportedDimensionError,
)

log = logging.getLogger(__name__)


def turan_part_sizes(n: int, t: int) -> List[int]:
    """Part sizes of the balanced complete t-partite graph on ``n`` vertices."""
    if n < 0 or t < 1:
        raise InvalidArgumentError(f"Turán graph needs n >= 0 and t >= 1, got n={n}, t={t}.")
    q, rem = divmod(n, t)
    return [q + 1] * rem + [q] * (t - rem)


def turan_binomial(n: int, k: int, t: int) -> int:
    """Number of k-cliques of the Turán graph ``T(n, t)``.

    This is the elementary symmetric polynomial ``e_k`` of the part sizes.
    """
    if k < 0:
        raise InvalidArgumentError(f"k must be non-negative, got {k}.")
    if k > t:
        return 0
    e = [1] + [0] * k
    for size in turan_part_sizes(n, t):
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * size
    return e[k]


@dataclass(frozen=True)
class CascadeRep:
    """``m = C(n_k, k)_t + C(n_{k-1}, k-1)_{t-1} + ...`` as ``(level, n_level)`` terms."""

    k: int
    t: int
    terms: Tuple[Tuple[int, int], ...]

    def colors(self, level: int) -> int:
        """Color count attached to ``level``."""
        return self.t - (self.k - level)

    @property
    def value(self) -> int:
        return sum(turan_binomial(n, level, self.colors(level)) for level, n in self.terms)


def _check_cascade(rep: CascadeRep, m: int) -> None:
    for (level, n), (_, n_next) in zip(rep.terms, rep.terms[1:]):
        colors = rep.colors(level)
        if not n - n // colors > n_next:
            raise InvariantViolation(
                f"Cascade term ({level}, {n}) is followed by n={n_next}, "
                f"breaking n - floor(n/{colors}) > {n_next}."
            )
    if rep.terms:
        level, n = rep.terms[-1]
        if not n >= level > 0:
            raise InvariantViolation(f"Last cascade term ({level}, {n}) needs n >= level > 0.")
    if rep.value != m:
        raise InvariantViolation(f"Cascade terms {rep.terms} sum to {rep.value}, not {m}.")


def _largest_n(remainder: int, level: int, colors: int) -> int:
    # Largest n with C(n, level)_colors <= remainder; C(level, level) = 1 <= remainder.
    lo = level
    hi = max(2 * level, 1)
    while turan_binomial(hi, level, colors) <= remainder:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if turan_binomial(mid, level, colors) <= remainder:
            lo = mid
        else:
            hi = mid
    return lo


def cascade_representation(m: int, k: int, t: int) -> CascadeRep:
    """Greedy cascade representation of ``m`` at level ``k`` with ``t`` colors.

    Every call re-checks the side conditions; ``m = 0`` gives the empty representation.

    Raises:
        InvalidArgumentError: Unless ``m >= 0`` and ``t >= k >= 1``.
        InvariantViolation: If the greedy result breaks a side condition.
    """
    if m < 0 or not t >= k >= 1:
        raise InvalidArgumentError(
            f"Cascade needs m >= 0 and t >= k >= 1, got m={m}, k={k}, t={t}."
        )
    terms: List[Tuple[int, int]] = []
    remainder, level, colors = m, k, t
    while remainder > 0:
        if level == 0:
            raise InvariantViolation(f"Greedy cascade of {m} ran out of levels at {remainder}.")
        n = _largest_n(remainder, level, colors)
        terms.append((level, n))
        remainder -= turan_binomial(n, level, colors)
        level, colors = level - 1, colors - 1
    rep = CascadeRep(k, t, tuple(terms))
    _check_cascade(rep, m)
    return rep


def brute_force_cascades(m: int, k: int, t: int) -> List[CascadeRep]:
    """Every representation of ``m`` satisfying the side conditions (uniqueness oracle)."""
    found: List[CascadeRep] = []

    def extend(remainder: int, level: int, colors: int, upper: Optional[int], terms: list) -> None:
        n = level
        while True:
            if upper is not None and n >= upper:
                return
            value = turan_binomial(n, level, colors)
            if value > remainder:
                return
            if value == remainder:
                found.append(CascadeRep(k, t, tuple(terms + [(level, n)])))
            elif level > 1:
                bound = n - n // colors
                extend(remainder - value, level - 1, colors - 1, bound, terms + [(level, n)])
            n += 1

    if m >= 1:
        extend(m, k, t, None, [])
    return found


def shadow_upper_bound(rep: CascadeRep) -> int:
    """Upper bound on the number of (k+1)-faces: ``sum C(n_l, l+1)_{colors(l)}``."""
    return sum(turan_binomial(n, level + 1, rep.colors(level)) for level, n in rep.terms)


@dataclass(frozen=True)
class FaceCounts:
    """``counts[i-1]`` is ``cl_i``, the number of i-element faces, for i = 1..t."""

    counts: Tuple[int, ...]

    def cl(self, i: int) -> int:
        return self.counts[i - 1]


def face_counts(M: BitTensor) -> FaceCounts:
    """Face counts of the complex whose maximal faces are the 1-entries of ``M``.

    Raises:
        InvariantViolation: If ``cl_t`` or ``cl_{t-1}`` disagree with the ones and smash counts.
    """
    counts = []
    for i in range(1, M.t + 1):
        total = 0
        for axes in itertools.combinations(range(M.t), i):
            total += len({tuple(c[a] for a in axes) for c in M.ones})
        counts.append(total)
    faces = FaceCounts(tuple(counts))
    if faces.cl(M.t) != M.ones_count:
        raise InvariantViolation(f"cl_t={faces.cl(M.t)} differs from {M.ones_count} ones.")
    if M.t >= 2:
        smashed = sum(smash(M, r).ones_count for r in range(M.t))
        if faces.cl(M.t - 1) != smashed:
            raise InvariantViolation(
                f"cl_(t-1)={faces.cl(M.t - 1)} differs from the smash total {smashed}."
            )
    return faces


def lemma_entry_bound(cl_tm1: int, cl_t: int, t: int) -> Tuple[int, int, bool]:
    """Cross-multiplied ``cl_t <= 2^t (cl_{t-1}/t)^(t/(t-1))``.

    Returns:
        ``(lhs, rhs, holds)`` with ``lhs = cl_t^(t-1) t^t`` and ``rhs = 2^(t(t-1)) cl_{t-1}^t``.
    """
    lhs = cl_t ** (t - 1) * t**t
    rhs = 2 ** (t * (t - 1)) * cl_tm1**t
    return lhs, rhs, lhs <= rhs


@dataclass(frozen=True)
class CorollaryCheck:
    """Entry bound of a tensor from its smash counts, in cross-multiplied form."""

    ones: int
    smash_total: int
    lhs: int
    rhs: int
    holds: bool


def corollary_entry_bound(M: BitTensor) -> CorollaryCheck:
    """Check ``ones(M) <= 2^t ((1/t) sum_r N_r)^(t/(t-1))`` with ``N_r`` the smash counts.

    Raises:
        UnsupportedDimensionError: If ``t < 3``.
    """
    if M.t < 3:
        raise UnsupportedDimensionError(f"The entry bound is stated for t >= 3, got t={M.t}.")
    smash_total = sum(smash(M, r).ones_count for r in range(M.t))
    lhs, rhs, holds = lemma_entry_bound(smash_total, M.ones_count, M.t)
    return CorollaryCheck(M.ones_count, smash_total, lhs, rhs, holds)


@dataclass(frozen=True)
class ShadowRow:
    k: int
    cl_k: int
    cl_next: int
    bound: int
    holds: bool


def shadow_check(M: BitTensor) -> List[ShadowRow]:
    """Compare ``cl_{k+1}`` against the shadow bound from ``cl_k`` for every level ``k < t``."""
    faces = face_counts(M)
    rows = []
    for k in range(1, M.t):
        bound = shadow_upper_bound(cascade_representation(faces.cl(k), k, M.t))
        rows.append(ShadowRow(k, faces.cl(k), faces.cl(k + 1), bound, faces.cl(k + 1) <= bound))
    return rows


def degenerate_guard_holds(M: BitTensor) -> bool:
    """Fewer than ``t`` (t-1)-faces force the matrix to be all zero."""
    if M.t < 2:
        return True
    faces = face_counts(M)
    return faces.cl(M.t - 1) >= M.t or faces.cl(M.t) == 0
