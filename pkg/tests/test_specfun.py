"""
Tests for special functions.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from dunkl_probe.errors import DomainError, RangeError
from dunkl_probe.specfun import (
    BESSEL_SERIES_SWITCH,
    bessel_i,
    bessel_i_ratio,
    bessel_i_scaled,
    bessel_i_series,
    beta,
    gegenbauer_at_one,
    gegenbauer_poly,
    laguerre_coefficients,
    laguerre_poly,
    laguerre_table,
    log_bessel_i,
    log_bessel_i_ratio,
)


@settings(max_examples=50, deadline=None)
@given(
    k=st.integers(min_value=0, max_value=30),
    delta=st.floats(min_value=-0.9, max_value=6.0),
    x=st.floats(min_value=0.0, max_value=20.0),
)
def test_laguerre_matches_scipy(k, delta, x):
    """Test the Laguerre recurrence against scipy's eval_genlaguerre."""
    expected = special.eval_genlaguerre(k, delta, x)
    assert laguerre_poly(k, delta, x) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_laguerre_table_shape():
    """Test the table carries one row per degree."""
    table = laguerre_table(5, 0.5, np.linspace(0.0, 3.0, 7))
    assert table.shape == (6, 7)
    assert np.all(table[0] == 1.0)


def test_laguerre_rejects_bad_parameter():
    """Test δ ≤ −1 is rejected."""
    with pytest.raises(DomainError):
        laguerre_poly(3, -1.0, 0.5)
    with pytest.raises(DomainError):
        laguerre_poly(-1, 0.0, 0.5)


def test_laguerre_exact_coefficients():
    """Test rational coefficients reproduce the floating-point polynomial."""
    delta = Fraction(3, 10)
    for k in range(7):
        coeffs = laguerre_coefficients(k, delta)
        t = 0.7
        value = sum(float(c) * t**i for i, c in enumerate(coeffs))
        assert value == pytest.approx(laguerre_poly(k, float(delta), t), rel=1e-12, abs=1e-14)
    assert laguerre_coefficients(1, delta) == [Fraction(13, 10), Fraction(-1)]


@pytest.mark.parametrize("lam", [0.25, 0.5, 1.0, 2.35])
def test_gegenbauer_matches_scipy(lam):
    """Test Gegenbauer values against scipy for λ > 0."""
    t = np.linspace(-1.0, 1.0, 11)
    for m in range(9):
        assert np.allclose(gegenbauer_poly(m, lam, t), special.eval_gegenbauer(m, lam, t))
        assert gegenbauer_at_one(m, lam) == pytest.approx(gegenbauer_poly(m, lam, 1.0))


def test_gegenbauer_chebyshev_limit():
    """Test the λ = 0 normalization reduces to Chebyshev polynomials."""
    t = np.linspace(-1.0, 1.0, 9)
    for m in range(1, 7):
        ratio = gegenbauer_poly(m, 0.0, t) / gegenbauer_at_one(m, 0.0)
        assert np.allclose(ratio, np.cos(m * np.arccos(t)))
    assert gegenbauer_poly(0, 0.0, 0.3) == 1.0


def test_gegenbauer_rejects_small_lambda():
    """Test λ ≤ −1/2 is rejected."""
    with pytest.raises(DomainError):
        gegenbauer_poly(2, -0.5, 0.1)


def test_beta():
    """Test B(2, 3) = 1/12."""
    assert beta(2.0, 3.0) == pytest.approx(1.0 / 12.0)
    with pytest.raises(DomainError):
        beta(0.0, 1.0)


@pytest.mark.parametrize("delta", [-0.5, 0.0, 0.3, 1.5, 7.0])
def test_bessel_matches_scipy(delta):
    """Test I_δ on both sides of the series switch."""
    z = np.array([0.1, 1.0, 5.0, 14.9, 15.1, 40.0, 300.0])
    assert np.allclose(bessel_i(delta, z), special.iv(delta, z), rtol=1e-12)
    assert np.allclose(bessel_i_scaled(delta, z), special.ive(delta, z), rtol=1e-12)


def test_bessel_branches_agree_at_switch():
    """Test the series and scipy branches meet at the crossover."""
    z = BESSEL_SERIES_SWITCH
    for delta in (0.0, 0.6, 2.35):
        series = bessel_i_series(delta, z)
        assert series == pytest.approx(special.iv(delta, z), rel=1e-13)


def test_bessel_ratio_at_zero():
    """Test I_δ(z)/z^δ → 1/(2^δ Γ(δ+1)) at the origin."""
    for delta in (0.0, 0.4, 3.0):
        expected = 1.0 / (2.0**delta * special.gamma(delta + 1.0))
        assert bessel_i_ratio(delta, 0.0) == pytest.approx(expected, rel=1e-14)
        assert log_bessel_i_ratio(delta, 0.0) == pytest.approx(np.log(expected), abs=1e-14)


def test_log_bessel_large_argument():
    """Test ln I_δ stays finite where I_δ overflows."""
    z = 2000.0
    expected = np.log(special.ive(1.5, z)) + z
    assert log_bessel_i(1.5, z) == pytest.approx(expected, rel=1e-13)
    with pytest.raises(RangeError):
        bessel_i(1.5, z)
    with pytest.raises(RangeError):
        bessel_i_ratio(1.5, z)


def test_bessel_domain():
    """Test order and argument checks."""
    with pytest.raises(DomainError):
        bessel_i(-1.0, 1.0)
    with pytest.raises(DomainError):
        bessel_i(0.5, -1.0)


def test_scalar_in_scalar_out():
    """Test scalar arguments return Python floats."""
    assert isinstance(bessel_i(0.5, 2.0), float)
    assert isinstance(laguerre_poly(2, 0.5, 1.0), float)
    assert isinstance(bessel_i(0.5, np.array([2.0])), np.ndarray)
