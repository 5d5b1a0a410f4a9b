"""
Tests for quadrature rules.
"""

import numpy as np
import pytest
from scipy import special

from dunkl_probe.errors import DomainError, SizeError
from dunkl_probe.quadrature import (
    MAX_RADIAL_SIZE,
    MAX_SPHERE_SIZE,
    gauss_jacobi,
    line_rule,
    power_panel_rule,
    product_rule,
    radial_rule,
    sphere_moment,
    sphere_rule,
)


def test_gauss_jacobi_exactness():
    """Test the n-point rule integrates t^k (1−t)^α (1+t)^β exactly up to 2n−1."""
    alpha, beta = 0.3, -0.4
    t, w = gauss_jacobi(alpha, beta, 6)
    for k in range(12):
        ref_t, ref_w = special.roots_jacobi(40, alpha, beta)
        assert np.sum(w * t**k) == pytest.approx(np.sum(ref_w * ref_t**k), rel=1e-12, abs=1e-14)
    assert np.all(np.diff(t) > 0)


def test_gauss_jacobi_domain():
    """Test exponents and sizes are checked."""
    with pytest.raises(DomainError):
        gauss_jacobi(-1.0, 0.0, 4)
    with pytest.raises(SizeError):
        gauss_jacobi(0.0, 0.0, 0)


@pytest.mark.parametrize("delta", [-0.5, 0.0, 0.9, 2.35])
def test_radial_rule_moments(delta):
    """Test ∫ r^{2k} e^{−r²} r^{2δ+1} dr = Γ(δ+k+1)/2."""
    rule = radial_rule(delta, 10)
    for k in range(20):
        values = rule.nodes ** (2 * k) * np.exp(-rule.nodes**2)
        expected = 0.5 * special.gamma(delta + k + 1.0)
        assert float(rule.integrate(values)) == pytest.approx(expected, rel=1e-11)


def test_radial_rule_large_size_keeps_small_weights():
    """Test the largest rule is finite and its mass is Γ(δ+1)/2."""
    rule = radial_rule(0.9, MAX_RADIAL_SIZE)
    assert np.all(np.isfinite(rule.log_weights))
    mass = rule.integrate(np.exp(-rule.nodes**2))
    assert float(mass) == pytest.approx(0.5 * special.gamma(1.9), rel=1e-9)


def test_radial_rule_scaled():
    """Test the rescaled rule integrates e^{−a r²}."""
    rule = radial_rule(0.5, 8).scaled(2.0)
    value = rule.integrate(np.exp(-2.0 * rule.nodes**2))
    assert float(value) == pytest.approx(0.5 * special.gamma(1.5) / 2.0**1.5, rel=1e-12)


def test_radial_rule_domain():
    """Test parameter and size limits."""
    with pytest.raises(DomainError):
        radial_rule(-0.6, 4)
    with pytest.raises(SizeError):
        radial_rule(0.0, MAX_RADIAL_SIZE + 1)


def test_radial_rule_rows():
    """Test rows list ascending nodes with positive weights."""
    rows = list(radial_rule(0.0, 5).to_rows())
    assert len(rows) == 5
    assert all(w > 0 for _, w in rows)
    assert [r for r, _ in rows] == sorted(r for r, _ in rows)


def test_line_rule_symmetric():
    """Test the line rule is symmetric and integrates odd powers to zero."""
    nodes, log_w = line_rule(0.6, 6)
    assert np.allclose(nodes, -nodes[::-1])
    w = np.exp(log_w)
    assert abs(np.sum(w * nodes**3 * np.exp(-(nodes**2)))) < 1e-14


def test_product_rule_mass():
    """Test ∫ h_κ² e^{−|x|²} dx = Π Γ(κ_j + 1/2)."""
    kappa = (0.6, 0.3)
    rule = product_rule(kappa, 8)
    gauss = np.exp(-np.sum(rule.points**2, axis=1))
    expected = np.prod([special.gamma(k + 0.5) for k in kappa])
    assert float(rule.integrate(gauss)) == pytest.approx(expected, rel=1e-12)


def test_sphere_rule_moments():
    """Test the sphere rule against closed-form monomial moments."""
    kappa = (0.6, 0.3, 0.0)
    rule = sphere_rule(3, kappa, 5)
    assert rule.exactness == 19
    for beta in [(0, 0, 0), (2, 0, 0), (2, 4, 2), (1, 2, 0), (6, 0, 8), (3, 3, 3)]:
        values = np.prod(rule.points ** np.array(beta), axis=1)
        expected = sphere_moment(kappa, beta)
        assert float(rule.integrate(values)) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_sphere_rule_mass_classical_circle():
    """Test the unweighted circle has length 2π."""
    rule = sphere_rule(2, (0.0, 0.0), 3)
    assert rule.mass == pytest.approx(2.0 * np.pi)
    assert np.allclose(np.sum(rule.points**2, axis=1), 1.0)


def test_sphere_rule_domain():
    """Test dimension, multiplicity and size checks."""
    with pytest.raises(DomainError):
        sphere_rule(1, (0.0,), 3)
    with pytest.raises(DomainError):
        sphere_rule(2, (0.0,), 3)
    with pytest.raises(DomainError):
        sphere_rule(2, (-0.1, 0.0), 3)
    with pytest.raises(SizeError):
        sphere_rule(2, (0.0, 0.0), MAX_SPHERE_SIZE + 1)


def test_power_panel_rule():
    """Test ∫₀^R r^c dr with the singular first panel."""
    c = -0.4
    nodes, weights = power_panel_rule(c, 3.0, 0.5, 8)
    assert np.sum(weights) == pytest.approx(3.0 ** (c + 1.0) / (c + 1.0), rel=1e-10)
    assert np.sum(weights * nodes**2) == pytest.approx(3.0 ** (c + 3.0) / (c + 3.0), rel=1e-10)
    with pytest.raises(DomainError):
        power_panel_rule(-1.0, 1.0, 0.5, 4)
