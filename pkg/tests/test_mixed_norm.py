"""
Tests for mixed norms, A_p weights, the Riesz sphere decomposition and the norm probe.
"""

import math

import numpy as np
import pytest

from dunkl_probe.dunkl_core import ReflectionGroupZ2d
from dunkl_probe.errors import DomainError, PreconditionError
from dunkl_probe.hermite_engine import SpectralCoeffs, indices_up_to, random_invariant_coeffs
from dunkl_probe.hharmonics import build_basis
from dunkl_probe.mixed_norm import (
    MixedNormParams,
    PowerWeight,
    ProbeRow,
    ap_check,
    ap_growth_ratios,
    ap_quotient,
    boundary_sweep,
    coefficient_function,
    dyadic_blocks,
    holder_check,
    lambda_values,
    mixed_norm,
    norm_ratio_probe,
    norm_ratios,
    probe_header,
    rotation_average_check,
    verify_laguerre_connection,
    verify_prop33,
)


@pytest.fixture(scope="module")
def group():
    """ℤ₂² with κ = (3/5, 3/10)."""
    return ReflectionGroupZ2d.from_kappa(["3/5", "3/10"])


@pytest.fixture(scope="module")
def basis(group):
    """Basis up to degree 6."""
    return build_basis(group, 6)


@pytest.fixture
def f(group):
    """Unit G-invariant expansion with N = 6."""
    return random_invariant_coeffs(group, 6, np.random.default_rng(21))


def test_params_validation(group):
    """Test exponent and dimension checks."""
    with pytest.raises(DomainError):
        MixedNormParams(1.0, group)
    with pytest.raises(DomainError):
        MixedNormParams(2.0, ReflectionGroupZ2d.from_kappa(["1/2"]))
    params = MixedNormParams(3.0, group, PowerWeight(0.6))
    assert params.delta == pytest.approx(0.9)
    assert params.p_conjugate == pytest.approx(1.5)
    assert params.dual().weight.a == pytest.approx(-0.3)


def test_mixed_norm_plancherel(group, f):
    """Test the L^{2,2} norm with w = 1 is the L² norm of the coefficients."""
    params = MixedNormParams(2.0, group)
    assert mixed_norm(coefficient_function(f), params) == pytest.approx(f.norm(), rel=1e-10)


def test_riesz_ratios_bounded_at_p2(group, f):
    """Test |Rf| ≤ f in L² on V_G."""
    ratios = norm_ratios(f, MixedNormParams(2.0, group))
    assert set(ratios) == {"1", "2", "vec"}
    assert ratios["vec"] <= 1.0 + 1e-9
    assert ratios["vec"] ** 2 == pytest.approx(ratios["1"] ** 2 + ratios["2"] ** 2, rel=1e-9)


@pytest.mark.parametrize("p,a", [(1.5, 0.0), (3.0, 0.5), (3.0, -0.5)])
def test_holder_duality(group, p, a):
    """Test |⟨f, g⟩| ≤ ‖f‖_{p,w} ‖g‖_{p',w^{1−p'}}."""
    rng = np.random.default_rng(5)
    f = random_invariant_coeffs(group, 4, rng)
    g = random_invariant_coeffs(group, 4, rng)
    check = holder_check(f, g, MixedNormParams(p, group, PowerWeight(a)))
    assert check.pairing <= check.bound * (1.0 + 1e-9)


def test_dyadic_blocks_sum_to_norm(group, f):
    """Test the blocks add up to ‖f‖^p and decay in j."""
    params = MixedNormParams(3.0, group, PowerWeight(0.5))
    blocks = dyadic_blocks(coefficient_function(f), params, 4)
    assert len(blocks) == 5
    assert all(b >= 0.0 for b in blocks)
    assert blocks[4] < blocks[2]
    total = mixed_norm(coefficient_function(f), params) ** 3.0
    assert sum(blocks) == pytest.approx(total, rel=1e-8)
    with pytest.raises(DomainError):
        dyadic_blocks(coefficient_function(f), params, -1)


def test_ap_check_inside_and_outside():
    """Test −(2δ+2) < a < (2δ+2)(p−1) agrees with the sampled quotients."""
    inside = ap_check(0.5, 2.0, 0.9)
    assert inside.admissible and inside.consistent
    assert inside.lower == pytest.approx(-3.8)
    assert inside.upper == pytest.approx(3.8)
    assert math.isfinite(inside.sampled_sup)
    for a in (4.0, -4.0):
        outside = ap_check(a, 2.0, 0.9)
        assert not outside.admissible
        assert outside.margin < 0.0
        assert outside.consistent
        assert math.isinf(outside.sampled_sup)


def test_ap_quotient_of_constant_weight():
    """Test the quotient of w = 1 is exactly 1."""
    assert ap_quotient(PowerWeight(0.0), 0.5, 2.0, 3.0, 0.9) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        ap_quotient(PowerWeight(0.0), 2.0, 1.0, 3.0, 0.9)
    with pytest.raises(DomainError):
        ap_check(0.0, 1.0, 0.9)


def test_ap_growth_ratios_for_constant_weight():
    """Test ∫₀^R dμ_δ / R^{2p(δ+1)} = R^{(2δ+2)(1−p)}/(2δ+2)."""
    delta, p = 0.9, 2.0
    radii = (1.0, 2.0, 4.0)
    ratios = ap_growth_ratios(0.0, p, delta, radii)
    for radius, ratio in zip(radii, ratios):
        expected = radius ** ((2 * delta + 2) * (1 - p)) / (2 * delta + 2)
        assert ratio == pytest.approx(expected, rel=1e-10)


def test_lambda_values_sources(group, basis):
    """Test measured eigenvalues agree with m(m+2λ) and differ from m(m+λ)."""
    measured = lambda_values(group, basis, "measured", [0, 2, 4])
    exact = lambda_values(group, basis, "exact", [0, 2, 4])
    alternative = lambda_values(group, basis, "paper", [2])
    assert measured[0] == 0.0
    for m in (2, 4):
        assert measured[m] == pytest.approx(exact[m], rel=1e-8)
    assert alternative[2] == pytest.approx(2 * (2 + 0.9))
    with pytest.raises(DomainError):
        lambda_values(group, basis, "guess", [2])


@pytest.mark.parametrize("source", ["measured", "exact"])
def test_riesz_sphere_decomposition(basis, f, source):
    """Test Σ_j ∫|R_j f|² dσ against the radial ladder and λ(m)/r² terms."""
    report = verify_prop33(f, basis, [0.2, 0.5, 1.0, 1.5, 2.0, 3.0], lambda_source=source)
    assert report.max_residual < 1e-6
    assert report.matches == "m(m+2λ)"


def test_riesz_sphere_decomposition_negative_control(basis, f):
    """Test the m(m+λ) eigenvalue leaves a visible residual."""
    report = verify_prop33(f, basis, [0.5, 1.0, 1.5], lambda_source="paper")
    assert report.max_residual > 1e-6


def test_riesz_sphere_decomposition_preconditions(group, basis):
    """Test truncation and dimension checks."""
    too_big = random_invariant_coeffs(group, 8, np.random.default_rng(0))
    with pytest.raises(DomainError):
        verify_prop33(too_big, basis, [1.0])
    group3 = ReflectionGroupZ2d.from_kappa(["1/2", "0", "1"])
    f3 = random_invariant_coeffs(group3, 2, np.random.default_rng(0))
    with pytest.raises(DomainError):
        verify_prop33(f3, build_basis(group3, 2), [1.0])


@pytest.mark.parametrize("m", [0, 2, 4])
def test_laguerre_connection(basis, f, m):
    """Test F_{m,j} = r^m L^{−1/2} f̃_{m,j} and the radial ladder with constant 1."""
    report = verify_laguerre_connection(f, basis, m, 0, [0.3, 0.7, 1.2, 2.0, 2.8])
    assert report.constant == pytest.approx(1.0, abs=1e-6)
    assert report.inverse_sqrt.spread < 1e-6
    assert report.derivative_deviation < 1e-6


def test_laguerre_connection_needs_invariant_member(basis, f):
    """Test members that are odd in a coordinate are rejected."""
    with pytest.raises(DomainError):
        verify_laguerre_connection(f, basis, 1, 0, [1.0])


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("a", [-0.5, 0.0, 0.5, 2.0])
def test_rotation_average(p, a):
    """Test the SO(2) average identity with ratio (2π)^{1−p/2}, including weights rough at 0."""
    f = random_invariant_coeffs(ReflectionGroupZ2d.classical(2), 6, np.random.default_rng(2))
    result = rotation_average_check(coefficient_function(f), p, PowerWeight(a))
    assert result.expected == pytest.approx((2.0 * np.pi) ** (1.0 - p / 2.0))
    assert result.ratio / result.expected == pytest.approx(1.0, abs=1e-7)


def test_rotation_average_general_coefficients():
    """Test functions without reflection symmetry at p = 1.5, a = 0.5."""
    indices = indices_up_to(2, 6)
    rng = np.random.default_rng(4)
    classical = ReflectionGroupZ2d.classical(2)
    for _ in range(3):
        coeffs = SpectralCoeffs(classical, dict(zip(indices, rng.standard_normal(len(indices)))), 6)
        result = rotation_average_check(coefficient_function(coeffs), 1.5, PowerWeight(0.5))
        assert result.ratio / result.expected == pytest.approx(1.0, abs=1e-7)


def test_rotation_average_rejects_nonintegrable_weight():
    """Test r^a with a <= −2 is rejected."""
    f = random_invariant_coeffs(ReflectionGroupZ2d.classical(2), 4, np.random.default_rng(2))
    with pytest.raises(DomainError):
        rotation_average_check(coefficient_function(f), 2.0, PowerWeight(-2.0))


def test_norm_probe_independent_of_workers(group):
    """Test rows depend on (seed, N, trial) only."""
    params = MixedNormParams(2.0, group)
    serial = norm_ratio_probe(params, trials=2, seed=7, n_list=[2, 4], workers=1)
    parallel = norm_ratio_probe(params, trials=2, seed=7, n_list=[2, 4], workers=3)
    assert serial.rows == parallel.rows
    assert len(serial.rows) == 2 * 2 * 3
    assert [row.n for row in serial.rows[:3]] == [2, 2, 2]
    assert set(serial.sup_by_n()) == {2, 4}
    assert max(serial.sup_by_n("vec").values()) <= 1.0 + 1e-9
    summary = serial.summary()
    assert summary["admissible"] is True
    assert set(summary["sup_ratio"]) == {"2", "4"}


def test_norm_probe_rejects_inadmissible_weight(group):
    """Test weights outside A_p are refused unless explicitly allowed."""
    params = MixedNormParams(2.0, group, PowerWeight(5.0))
    with pytest.raises(PreconditionError):
        norm_ratio_probe(params, trials=1, seed=1, n_list=[2])


def test_probe_rows_csv():
    """Test the CSV layout of one probe row."""
    row = ProbeRow(3, 0, 8, 1.5, -0.5, ("3/5", "3/10"), "vec", 0.1)
    assert probe_header(2) == ["seed", "trial", "N", "p", "a", "kappa1", "kappa2", "j", "ratio"]
    assert row.as_csv_row() == ["3", "0", "8", "1.5", "-0.5", "3/5", "3/10", "vec", "0.1"]


def test_boundary_sweep(group):
    """Test weights approach the A_p upper end in ascending order."""
    sweep = boundary_sweep(2.0, group, [0.9, 0.5], trials=2, seed=3, n=4)

    assert sweep.upper == pytest.approx(3.8)
    assert sweep.exponents == pytest.approx((1.9, 3.42))
    assert len(sweep.sup_ratios) == 2
    assert all(ratio > 0.0 for ratio in sweep.sup_ratios)
    assert sweep.summary()["increasing"] is sweep.increasing
    with pytest.raises(DomainError):
        boundary_sweep(2.0, group, [0.5, 1.0], trials=1, seed=3, n=4)
