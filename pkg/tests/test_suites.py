"""
Tests for the suite runner and suite helpers.
"""

import asyncio
import math
import time

import numpy as np
import pytest

from dunkl_probe.config import Config
from dunkl_probe.report import (
    STATUS_ERROR,
    STATUS_FAILED,
    STATUS_PASSED,
    STATUS_SKIPPED,
    STATUS_TIMEOUT,
    CheckRecord,
)
from dunkl_probe.suites import (
    SUITE_NAMES,
    SUITES,
    SuiteContext,
    SuiteRunner,
    SuiteSkipped,
    kernel_rows,
)


def _passing(ctx):
    return [CheckRecord.residual("zero", "0 = 0", 0.0, 1e-12)]


def _failing(ctx):
    return [CheckRecord.residual("big", "1 = 0", 1.0, 1e-12)]


def _raising(ctx):
    raise ArithmeticError("singular Gram matrix")


def _skipping(ctx):
    raise SuiteSkipped("Needs d = 2, configured d = 3")


def _sleeping(ctx):
    time.sleep(0.5)
    return []


REGISTRY = {
    "pass": _passing,
    "fail": _failing,
    "raise": _raising,
    "skip": _skipping,
    "sleep": _sleeping,
}


@pytest.fixture
def fast_config():
    """Configuration with a short suite timeout."""
    return Config(
        data={
            "group": {"dimension": 2, "kappa": ["1/2", "1/4"]},
            "seed": 11,
            "runner": {"suite_timeout_sec": 0.1, "max_concurrent_suites": 2},
        }
    )


@pytest.fixture
def runner(fast_config):
    """Create a runner over the stub registry."""
    return SuiteRunner(fast_config, registry=REGISTRY)


def test_registry_matches_names():
    """Test every named suite is registered."""
    assert set(SUITES) == set(SUITE_NAMES)


def test_runner_initialization(config):
    """Test runner picks up the global config and built-in suites."""
    runner = SuiteRunner()
    assert runner.config is config
    assert runner.registry is SUITES
    assert runner.context.group.d == config.dimension


@pytest.mark.asyncio
async def test_run_suite_statuses(runner):
    """Test each outcome maps to its status."""
    results = await runner.run_suites(["pass", "fail", "raise", "skip"])

    assert [r.suite for r in results] == ["pass", "fail", "raise", "skip"]
    assert [r.status for r in results] == [
        STATUS_PASSED,
        STATUS_FAILED,
        STATUS_ERROR,
        STATUS_SKIPPED,
    ]
    assert "ArithmeticError" in results[2].error_message
    assert "d = 2" in results[3].error_message
    assert all(r.elapsed_sec >= 0.0 for r in results)


@pytest.mark.asyncio
async def test_run_suite_timeout(runner):
    """Test a suite exceeding its timeout is reported, not raised."""
    result = await runner.run_suite("sleep", asyncio.Semaphore(1))

    assert result.status == STATUS_TIMEOUT
    assert "timeout" in result.error_message


@pytest.mark.asyncio
async def test_unknown_suite_is_error(runner):
    """Test a name missing from the registry becomes an error result."""
    result = await runner.run_suite("nonexistent", asyncio.Semaphore(1))

    assert result.status == STATUS_ERROR
    assert "KeyError" in result.error_message


@pytest.mark.asyncio
async def test_builtin_dunkl_suite(config):
    """Test the exact Dunkl operator suite passes on the default group."""
    runner = SuiteRunner(config)
    (result,) = await runner.run_suites(["dunkl"])

    assert result.status == STATUS_PASSED, [r.name for r in result.failed_records]
    assert any(r.name == "commutativity" for r in result.records)


@pytest.mark.slow
@pytest.mark.asyncio
@pytest.mark.parametrize("name", SUITE_NAMES)
async def test_builtin_suite_passes_on_bundled_config(name):
    """Test every built-in suite passes end to end on the bundled configuration."""
    runner = SuiteRunner(Config())
    result = await runner.run_suite(name, asyncio.Semaphore(1))

    assert result.status == STATUS_PASSED, result.error_message or [
        (r.name, r.value, r.tolerance) for r in result.failed_records
    ]


def test_dunkl_suite_draws_random_kappa(fast_config):
    """Test the operator identities are checked for random rational κ in d = 1, 2, 3."""
    records = {r.name: r for r in SUITES["dunkl"](SuiteContext.from_config(fast_config))}

    for name in ("commutativity_random_kappa", "commutator_random_kappa"):
        assert records[name].passed
    assert records["harmonicity_random_kappa"].passed
    drawn = records["commutativity_random_kappa"].details["kappa"]
    assert sorted({len(kappa) for kappa in drawn}) == [1, 2, 3]
    assert len({tuple(kappa) for kappa in drawn}) > 1


def test_hermite_suite_checks_float_multiplicities():
    """Test the exact eigen residual also runs when κ has large denominators."""
    config = Config()
    config.override("group.kappa", ["1234567/10000000", "1/3"])
    ctx = SuiteContext.from_config(config)
    assert not ctx.group.supports_exact

    records = {r.name: r for r in SUITES["hermite"](ctx)}
    eigen = records["eigenfunction_residual"]
    assert eigen.passed
    assert eigen.details["checked"] == 15


def test_context_rng_streams(fast_config):
    """Test suite generators depend on seed, suite and stream only."""
    ctx = SuiteContext.from_config(fast_config)
    again = SuiteContext.from_config(fast_config)

    first = ctx.rng("hermite", 1).random(4)
    np.testing.assert_array_equal(first, again.rng("hermite", 1).random(4))
    assert not np.array_equal(first, ctx.rng("hermite", 2).random(4))
    assert not np.array_equal(first, ctx.rng("laguerre", 1).random(4))


def test_context_tolerance_scale():
    """Test tolerances are multiplied by the configured scale."""
    config = Config(data={"group": {"dimension": 1, "kappa": [0]}, "tolerance": {"scale": 10}})
    ctx = SuiteContext.from_config(config)
    assert ctx.tol(1e-9) == pytest.approx(1e-8)


def test_require_dimension(fast_config):
    """Test dimension preconditions raise SuiteSkipped."""
    ctx = SuiteContext.from_config(fast_config)
    ctx.require_dimension(2, 2)
    ctx.require_dimension(1)
    with pytest.raises(SuiteSkipped, match="Needs d >= 3"):
        ctx.require_dimension(3)


def test_kernel_rows_statuses():
    """Test kernel rows compare where the spectral tail is negligible."""
    rows = kernel_rows(0.9, [0.5, 2.0], [0.5, 1.0], terms=200)

    assert len(rows) == 8
    compared = [row for row in rows if row[7] == "compared"]
    assert compared
    for row in compared:
        assert row[6] < 1e-10
    for row in rows:
        if row[7] == "closed-form-only":
            assert math.isnan(row[5])
