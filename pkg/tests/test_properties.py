"""Tests for the property suite runner."""

import itertools
from unittest.mock import patch

import pytest

from tensor_extremal.core import full_tensor, tensor_new, zero_tensor
from tensor_extremal.exceptions import InvariantViolation
from tensor_extremal.properties import (
    MAX_COUNTEREXAMPLES,
    PROPERTIES,
    PropertyResult,
    SuiteConfig,
    _shadow_sweep,
    bounded_shapes,
    rng_for,
    run_property,
    run_suite,
)


def test_rng_is_seeded_per_property() -> None:
    cfg = SuiteConfig(seed=7)
    first = rng_for(cfg, "shadow_bound").integers(0, 1000, size=5).tolist()
    again = rng_for(cfg, "shadow_bound").integers(0, 1000, size=5).tolist()
    other = rng_for(cfg, "entry_bound").integers(0, 1000, size=5).tolist()
    assert first == again
    assert first != other


def test_scale() -> None:
    assert SuiteConfig(quick=True).scale(3, 30) == 3
    assert SuiteConfig().scale(3, 30) == 30


class TestPropertyResult:
    def test_counterexamples_are_capped(self) -> None:
        result = PropertyResult("demo")
        M = tensor_new((1, 1), [(0, 0)])
        for _ in range(MAX_COUNTEREXAMPLES + 3):
            result.check(False, M, note="always fails")
        result.check(True, M)
        assert result.checked == MAX_COUNTEREXAMPLES + 4
        assert result.failures == MAX_COUNTEREXAMPLES + 3
        assert len(result.counterexamples) == MAX_COUNTEREXAMPLES
        assert result.counterexamples[0].context == {"note": "always fails"}
        assert not result.passed

    def test_as_dict(self) -> None:
        result = PropertyResult("demo")
        result.check(True)
        assert result.as_dict() == {
            "name": "demo",
            "passed": True,
            "checked": 1,
            "failures": 0,
            "vacuous": 0,
            "error": None,
        }


def test_run_property_records_errors() -> None:
    def broken(cfg: SuiteConfig, result: PropertyResult) -> None:
        result.check(True)
        raise InvariantViolation("cl_2 above its bound")

    def crashing(cfg: SuiteConfig, result: PropertyResult) -> None:
        raise ZeroDivisionError("oops")

    with patch.dict(PROPERTIES, {"broken": broken, "crashing": crashing}):
        result = run_property("broken", SuiteConfig(quick=True))
        assert result.checked == 1
        assert result.error == "cl_2 above its bound"
        assert not result.passed
        assert run_property("crashing", SuiteConfig()).error == "ZeroDivisionError: oops"


@pytest.mark.asyncio
async def test_run_suite_sorts_results() -> None:
    names = ["turan_cliques", "alpha_constants", "division_count"]
    results = await run_suite(SuiteConfig(quick=True, threads=3), names)
    assert [r.name for r in results] == sorted(names)
    assert all(r.passed and r.checked > 0 for r in results)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_quick_property_passes(name: str) -> None:
    result = run_property(name, SuiteConfig(quick=True))
    assert result.error is None
    assert result.passed, result.counterexamples


def test_threshold_property_counts_vacuous_sizes() -> None:
    # alpha_2(2) n and alpha_3(2) n^2 exceed n^t at every desk size
    result = run_property("full_division_threshold", SuiteConfig(quick=True))
    assert result.passed
    assert result.vacuous == 5
    assert result.checked == 0


def test_bounded_shapes() -> None:
    three = [shape.dims for shape in bounded_shapes(3, 12)]
    four = [shape.dims for shape in bounded_shapes(4, 12)]
    assert (len(three), len(four)) == (74, 133)
    assert three == sorted(three)
    assert {(1, 3, 4), (1, 1, 12), (2, 6, 1), (2, 2, 3)} <= set(three)
    assert {(1, 2, 2, 3), (2, 2, 3, 1), (1, 1, 1, 12)} <= set(four)
    assert (2, 2, 2, 2) not in four


def test_full_shadow_sweep_covers_bounded_shapes() -> None:
    with patch(
        "tensor_extremal.properties.enumerate_tensors",
        side_effect=lambda shape: iter([zero_tensor(shape)]),
    ):
        sweep = _shadow_sweep(SuiteConfig(), "shadow_bound")
        swept = [M.dims for M in itertools.islice(sweep, 211)]
    assert swept[:4] == [(2, 2), (2, 3), (3, 3), (3, 4)]
    assert swept[4:] == [s.dims for t in (3, 4) for s in bounded_shapes(t, 12)]


class TestFullDivisionEmbeds:
    def test_draws_without_full_division_are_vacuous(self) -> None:
        with patch("tensor_extremal.properties.find_full_division", return_value=None):
            result = run_property("full_division_embeds_free_patterns", SuiteConfig(quick=True))
        assert result.passed
        assert (result.checked, result.vacuous) == (0, 1000)

    def test_checks_the_requested_number_of_instances(self) -> None:
        with patch(
            "tensor_extremal.properties.random_tensor",
            side_effect=lambda shape, density, rng: full_tensor(shape),
        ):
            result = run_property("full_division_embeds_free_patterns", SuiteConfig(quick=True))
        assert result.passed
        assert result.vacuous == 0
        assert result.checked >= 2 * 100
