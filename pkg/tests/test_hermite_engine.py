"""
Tests for the generalized Hermite engine.
"""

import math

import numpy as np
import pytest
from scipy import special

from dunkl_probe.dunkl_core import ReflectionGroupZ2d
from dunkl_probe.errors import DomainError
from dunkl_probe.hermite_engine import (
    HermiteIndex,
    SpectralCoeffs,
    analyze,
    apply_heat,
    eigen_residual,
    factorization_defect,
    g_symmetrize,
    indices_up_to,
    inner,
    ladder_table,
    mehler_constant,
    mehler_constant_closed,
    mehler_kernel,
    mehler_spectral,
    phi_table,
    random_invariant_coeffs,
    riesz_adjoint_defect,
    synthesize,
)
from dunkl_probe.quadrature import line_rule


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(11)


def test_indices_up_to():
    """Test index enumeration with and without the parity filter."""
    assert len(indices_up_to(2, 4)) == 15
    even = indices_up_to(2, 4, even_only=True)
    assert [i.alpha for i in even] == [(0, 0), (0, 2), (0, 4), (2, 0), (2, 2), (4, 0)]
    assert all(i.is_even for i in even)


def test_hermite_index_rejects_negative():
    """Test negative multi-indices are rejected."""
    with pytest.raises(DomainError):
        HermiteIndex((1, -1))
    assert HermiteIndex((0, 2)).shifted(0, -1) is None


@pytest.mark.parametrize("kappa", [0.0, 0.3, 0.6, 2.0])
def test_phi_orthonormal(kappa):
    """Test ∫ φ_m φ_n |x|^{2κ} dx = δ_mn."""
    nodes, log_w = line_rule(kappa, 24)
    table = phi_table(20, kappa, nodes)
    gram = (table * np.exp(log_w)) @ table.T
    assert np.allclose(gram, np.eye(21), atol=1e-11)


def test_phi_classical_hermite_functions():
    """Test κ = 0 reproduces the classical Hermite functions."""
    x = np.linspace(-4.0, 4.0, 17)
    table = phi_table(10, 0.0, x)
    for n in range(11):
        norm = math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))
        expected = special.eval_hermite(n, x) * np.exp(-0.5 * x * x) / norm
        assert np.allclose(table[n], expected, atol=1e-12)


def test_eigen_residual_vanishes(group2):
    """Test Φ_α is an exact eigenfunction with eigenvalue 2|α| + d + 2γ."""
    for index in indices_up_to(2, 6):
        assert eigen_residual(index, group2).is_zero


def test_ladder_closed_form_classical(classical2):
    """Test the classical ladder coefficients are √(2n)."""
    table = ladder_table(classical2, 12)
    assert table.closed_form_deviation() < 1e-10
    assert table.down[0][3] == pytest.approx(math.sqrt(6.0))


def test_ladder_consistency(group2):
    """Test the measured coefficients reproduce the eigenvalues."""
    table = ladder_table(group2, 16)
    for index in indices_up_to(2, 15):
        assert abs(table.consistency_residual(index)) < 1e-9
    assert table.closed_form_deviation() < 1e-8


def test_ladder_level_range(group2):
    """Test the level cap."""
    with pytest.raises(DomainError):
        ladder_table(group2, 65)


def test_factorization_defect(group2):
    """Test H − d − Σ A_j*A_j acts as 2Σκ_j(−1)^{α_j}."""
    for alpha in [(0, 0), (1, 0), (2, 3), (4, 1)]:
        defect = factorization_defect(group2, alpha)
        assert defect.measured == pytest.approx(defect.expected, abs=1e-9)
    classical = factorization_defect(group2.classical(2), (3, 2))
    assert classical.expected == 0.0


def test_analyze_synthesize_round_trip(group2, rng):
    """Test analysis of a synthesized expansion recovers its coefficients."""
    f = random_invariant_coeffs(group2, 6, rng)
    g = analyze(lambda pts: synthesize(f, pts), group2, 6)
    for index in indices_up_to(2, 6):
        assert g.coefficient(index.alpha) == pytest.approx(f.coefficient(index.alpha), abs=1e-10)


def test_random_invariant_coeffs(group2, rng):
    """Test random draws are unit-norm members of V_G."""
    f = random_invariant_coeffs(group2, 8, rng)
    assert f.norm() == pytest.approx(1.0)
    assert f.is_g_invariant()
    assert inner(f, f) == pytest.approx(1.0)


def test_heat_and_symmetrization(group2, rng):
    """Test e^{−tH} keeps V_G and scales each coefficient by its eigenvalue."""
    f = random_invariant_coeffs(group2, 4, rng)
    heated = apply_heat(0.5, f)
    assert heated.is_g_invariant()
    lam = 2 * 2 + 2 + 2 * group2.gamma
    assert heated.coefficient((2, 0)) == pytest.approx(math.exp(-0.5 * lam) * f.coefficient((2, 0)))
    with pytest.raises(DomainError):
        apply_heat(0.0, f)

    mixed = SpectralCoeffs(group2, {HermiteIndex((1, 0)): 1.0, HermiteIndex((2, 0)): 2.0}, 2)
    assert dict(g_symmetrize(mixed).items()) == {HermiteIndex((2, 0)): 2.0}


def test_riesz_adjoint_defect_is_finite(group2, rng):
    """Test the adjoint defect is computable from coefficients."""
    f = random_invariant_coeffs(group2, 4, rng)
    g = random_invariant_coeffs(group2, 4, rng)
    assert np.isfinite(riesz_adjoint_defect(0, f, g))


def test_spectral_coeffs_truncation(group2):
    """Test entries above N are rejected and dict form round-trips."""
    with pytest.raises(DomainError):
        SpectralCoeffs(group2, {HermiteIndex((3, 0)): 1.0}, 2)
    f = SpectralCoeffs.basis(group2, (2, 2))
    assert SpectralCoeffs.from_dict(f.to_dict()) == f


@pytest.mark.parametrize("t", [0.3, 0.5, 1.0, 2.0])
def test_mehler_closed_form_matches_spectral(group2, rng, t):
    """Test the closed-form heat kernel against its eigenfunction expansion."""
    x = rng.uniform(-1.5, 1.5, size=(5, 2))
    y = rng.uniform(-1.5, 1.5, size=(5, 2))
    closed = mehler_kernel(group2, t, x, y)
    spectral = mehler_spectral(group2, t, x, y, 60)
    assert np.allclose(closed, spectral, rtol=1e-8)


@pytest.mark.parametrize("kappa", [["0"], ["1/2"], ["3/5", "3/10"], ["1", "0", "2/3"]])
def test_mehler_constant_closed_form(kappa):
    """Test the calibrated normalization equals Π_j 2^{−κ_j−1/2}/Γ(κ_j+1/2)."""
    group = ReflectionGroupZ2d.from_kappa(kappa)
    assert mehler_constant(group) == pytest.approx(mehler_constant_closed(group), rel=1e-10)
    if kappa == ["0"]:
        assert mehler_constant_closed(group) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))


def test_mehler_rejects_nonpositive_time(group2):
    """Test t ≤ 0 is rejected."""
    with pytest.raises(DomainError):
        mehler_kernel(group2, 0.0, np.zeros(2), np.zeros(2))
    with pytest.raises(DomainError):
        mehler_spectral(group2, -1.0, np.zeros(2), np.zeros(2), 4)
