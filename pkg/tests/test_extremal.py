"""Tests for exact extremal numbers, avoider counts and the alpha constants."""

from fractions import Fraction

import pytest
import sympy

from tensor_extremal.containment import avoids
from tensor_extremal.core import enumerate_tensors, full_tensor, tensor_new, zero_tensor
from tensor_extremal.exceptions import (
    InvalidArgumentError,
    ResourceCapError,
    UnsupportedDimensionError,
)
from tensor_extremal.extremal import (
    AlphaTable,
    alpha,
    block_contraction,
    count_avoiders,
    extremal_division,
    extremal_pattern,
    f_exact,
    generalized_binomial,
    iter_avoiders,
    klazar_check,
    klazar_fibers,
    marcus_tardos_base,
    recursion_step,
    sunflower_patterns,
    sunflower_reduction_check,
)
from tensor_extremal.pattern import (
    Pattern,
    SunflowerSpec,
    make_identity,
    make_sunflower,
)


class TestAlpha:
    def test_two_dimensional_base(self) -> None:
        assert marcus_tardos_base(2) == 192
        assert alpha(2, 2) == 192
        assert alpha(2, 3) == 13608

    def test_three_dimensional(self) -> None:
        p = 2**3 * 192**3
        assert alpha(3, 2) == 6 * Fraction(p - 1, p) ** 2
        assert alpha(3, 2) < alpha(2, 2)

    def test_replaceable_base(self) -> None:
        table = AlphaTable(base=lambda k: 1)
        assert table.alpha(2, 2) == 1
        assert table.alpha(3, 2) == Fraction(147, 32)
        assert set(table.entries) == {(2, 2), (3, 2)}

    def test_invalid(self) -> None:
        with pytest.raises(InvalidArgumentError):
            alpha(1, 2)
        with pytest.raises(InvalidArgumentError):
            alpha(3, 1)

    def test_generalized_binomial(self) -> None:
        assert generalized_binomial(Fraction(5, 2), 2) == Fraction(15, 8)
        assert generalized_binomial(7, 0) == 1
        assert generalized_binomial(4, 2) == 6


class TestRecursionStep:
    @pytest.mark.parametrize("t", [3, 4])
    def test_default_coefficient(self, t: int) -> None:
        step = recursion_step(t, 2)
        expected = sympy.Integer(2) ** (t - sympy.Rational(t, t - 1))
        assert sympy.simplify(step.coefficient - expected) == 0
        assert step.exceeds_half
        assert step.default_p
        assert step.p == (2 * alpha(t - 1, 2)) ** t

    def test_explicit_p(self) -> None:
        step = recursion_step(3, 2, p=1)
        assert step.p == 1
        assert step.additive == 0
        assert not step.default_p

    def test_as_dict(self) -> None:
        report = recursion_step(3, 2).as_dict()
        assert report["exceeds_half"] is True
        assert report["coefficient_float"] == pytest.approx(2**1.5)

    def test_needs_three_axes(self) -> None:
        with pytest.raises(UnsupportedDimensionError):
            recursion_step(2, 2)


class TestExtremalPattern:
    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 3), (3, 5), (4, 7)])
    def test_identity_staircase(self, identity2: Pattern, n: int, expected: int) -> None:
        report = extremal_pattern(n, identity2)
        assert report.exact
        assert report.value == expected
        assert report.witness is not None
        assert report.witness.ones_count == expected
        assert avoids(report.witness, identity2)

    def test_matches_brute_force(self, identity2: Pattern) -> None:
        best = max(M.ones_count for M in enumerate_tensors((3, 3)) if avoids(M, identity2))
        assert f_exact(3, identity2).value == best == 5

    def test_pattern_too_large(self) -> None:
        report = extremal_pattern(2, make_identity(3, 3))
        assert report.value == 8
        assert report.witness == full_tensor((2, 2, 2))

    def test_empty_pattern(self) -> None:
        report = extremal_pattern(3, zero_tensor((2, 2)))
        assert (report.value, report.witness, report.exact) == (0, None, True)

    def test_single_one_pattern(self) -> None:
        report = extremal_pattern(2, tensor_new((1, 1, 1), [(0, 0, 0)]))
        assert report.value == 0
        assert report.exact

    def test_three_dimensional_identity(self) -> None:
        report = extremal_pattern(2, make_identity(3, 2))
        assert report.exact
        assert report.value == 7

    def test_budget_gives_lower_bound(self, identity2: Pattern) -> None:
        report = extremal_pattern(3, identity2, budget=1)
        assert not report.exact
        assert report.value == 5
        assert report.witness is not None and avoids(report.witness, identity2)

    def test_threads_agree(self, identity2: Pattern) -> None:
        sequential = extremal_pattern(3, identity2, threads=1)
        parallel = extremal_pattern(3, identity2, threads=2)
        assert parallel.value == sequential.value
        assert parallel.exact
        assert parallel.witness is not None and avoids(parallel.witness, identity2)

    def test_invalid_arguments(self, identity2: Pattern) -> None:
        with pytest.raises(InvalidArgumentError):
            extremal_pattern(0, identity2)
        with pytest.raises(InvalidArgumentError):
            extremal_pattern(2, identity2, t=3)
        with pytest.raises(InvalidArgumentError):
            extremal_pattern(2, tensor_new((2, 2), [(0, 0), (0, 1)]))

    def test_monotone_in_n(self) -> None:
        P = tensor_new((2, 2), [(0, 1), (1, 0)])
        values = [extremal_pattern(n, P).value for n in range(1, 5)]
        assert values == sorted(values)


class TestExtremalDivision:
    def test_two_by_two(self) -> None:
        assert extremal_division(2, 2, 2).value == 3

    def test_single_part(self) -> None:
        assert extremal_division(3, 1, 2).value == 0

    def test_invalid_k(self) -> None:
        with pytest.raises(InvalidArgumentError):
            extremal_division(2, 3, 2)


class TestCountAvoiders:
    def test_examples(self, identity2: Pattern) -> None:
        assert count_avoiders(1, identity2) == 2
        assert count_avoiders(2, identity2) == 12
        assert count_avoiders(1, tensor_new((1, 1), [(0, 0)])) == 1

    @pytest.mark.parametrize("n", [1, 2])
    def test_empty_pattern_matches_brute_force(self, n: int) -> None:
        P = zero_tensor((2, 2))
        expected = sum(1 for M in enumerate_tensors((n, n)) if avoids(M, P))
        assert count_avoiders(n, P) == expected
        assert count_avoiders(n, P, threads=2) == expected
        assert len(list(iter_avoiders(n, P))) == expected
        assert count_avoiders(2, P) == 0

    def test_threads_agree(self, identity2: Pattern) -> None:
        assert count_avoiders(3, identity2, threads=2) == count_avoiders(3, identity2)

    def test_iteration_order(self, identity2: Pattern) -> None:
        expected = [M for M in enumerate_tensors((2, 2)) if avoids(M, identity2)]
        assert list(iter_avoiders(2, identity2)) == expected

    def test_cap(self, identity2: Pattern) -> None:
        with pytest.raises(ResourceCapError):
            count_avoiders(6, identity2)
        with pytest.raises(ResourceCapError):
            count_avoiders(3, identity2, cap=8)


class TestKlazar:
    def test_identity(self, identity2: Pattern) -> None:
        check = klazar_check(1, identity2)
        assert (check.lhs, check.rhs, check.holds, check.f_value) == (12, 30, True, 1)

    def test_pattern_larger_than_doubled_side(self) -> None:
        check = klazar_check(1, make_identity(2, 3))
        assert (check.lhs, check.rhs, check.holds) == (16, 30, True)

    def test_block_contraction(self) -> None:
        M = tensor_new((4, 4), [(i, i) for i in range(4)])
        assert block_contraction(M) == tensor_new((2, 2), [(0, 0), (1, 1)])
        with pytest.raises(InvalidArgumentError):
            block_contraction(tensor_new((3, 2), []))

    @pytest.mark.parametrize("n", [1, 2])
    def test_fibers(self, identity2: Pattern, n: int) -> None:
        fibers = klazar_fibers(n, identity2)
        assert all(fiber.holds for fiber in fibers)
        assert sum(fiber.size for fiber in fibers) == count_avoiders(2 * n, identity2)

    def test_fibers_of_empty_pattern(self) -> None:
        P = zero_tensor((2, 2))
        assert all(fiber.holds for fiber in klazar_fibers(2, P))
        assert sum(fiber.size for fiber in klazar_fibers(2, P)) == count_avoiders(4, P) == 0


class TestSunflowerReduction:
    def test_core_axis(self) -> None:
        P = make_sunflower(3, SunflowerSpec(frozenset({2}), {2: 0}), 2, (2, 2, 1))
        outcome = sunflower_reduction_check(2, P)
        assert outcome.axis == 2
        assert outcome.reduced == tensor_new((2, 2), [(0, 0), (1, 1)])
        assert (outcome.lhs, outcome.rhs, outcome.holds) == (6, 6, True)

    def test_single_one_with_explicit_core(self) -> None:
        P = tensor_new((1, 1, 1), [(0, 0, 0)])
        outcome = sunflower_reduction_check(2, P, SunflowerSpec(frozenset({0}), {0: 0}))
        assert outcome.reduced == tensor_new((1, 1), [(0, 0)])
        assert (outcome.lhs, outcome.rhs, outcome.holds) == (0, 0, True)

    def test_order_one(self) -> None:
        P = make_sunflower(3, SunflowerSpec(frozenset({2}), {2: 0}), 2, (2, 2, 1))
        outcome = sunflower_reduction_check(1, P)
        assert outcome.lhs <= outcome.rhs == 1

    def test_empty_core_rejected(self) -> None:
        with pytest.raises(InvalidArgumentError):
            sunflower_reduction_check(2, make_identity(3, 2))

    def test_not_a_sunflower(self) -> None:
        P = tensor_new((2, 3, 3), [(0, 0, 0), (0, 1, 1), (1, 2, 2)])
        with pytest.raises(InvalidArgumentError):
            sunflower_reduction_check(2, P)

    def test_generated_patterns_have_cores(self) -> None:
        found = list(sunflower_patterns(3, 2, 2))
        assert found
        assert all(P.sunflower is not None and P.sunflower.core for P in found)
