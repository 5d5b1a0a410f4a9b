"""
Tests for polynomials, Dunkl operators and the Dunkl kernel.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dunkl_probe.dunkl_core import (
    MultiPoly,
    ReflectionGroupZ2d,
    dunkl_directional,
    dunkl_kernel,
    dunkl_kernel_series_1d,
    dunkl_laplacian,
    dunkl_op,
    dunkl_op_numeric,
    log_dunkl_kernel,
    monomials_of_degree,
    parse_rational,
)
from dunkl_probe.errors import DomainError, RangeError
from dunkl_probe.hharmonics import build_basis, harmonic_dimension

polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    max_size=5,
)

polys3 = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    max_size=5,
)


def kappas(d):
    """Nonnegative rational multiplicities for ℤ₂^d."""
    return st.lists(
        st.fractions(min_value=0, max_value=4, max_denominator=12), min_size=d, max_size=d
    ).map(lambda ks: ReflectionGroupZ2d(tuple(ks)))


def test_parse_rational():
    """Test multiplicities parse from strings, ints and decimal floats."""
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational(0.6) == Fraction(3, 5)
    assert parse_rational(2) == Fraction(2)
    for bad in ("abc", float("nan"), True, "1/0"):
        with pytest.raises(DomainError):
            parse_rational(bad)


def test_group_properties(group2):
    """Test γ, λ_κ and labels of κ = (3/5, 3/10)."""
    assert group2.d == 2
    assert group2.gamma_exact == Fraction(9, 10)
    assert group2.lambda_kappa == pytest.approx(0.9)
    assert group2.kappa_labels == ["3/5", "3/10"]
    assert not group2.is_classical
    assert ReflectionGroupZ2d.classical(3).is_classical


def test_group_rejects_negative_multiplicity():
    """Test κ_j < 0 is rejected."""
    with pytest.raises(DomainError):
        ReflectionGroupZ2d.from_kappa(["-1/2", "0"])


def test_polynomial_arithmetic():
    """Test ring operations and the canonical text form."""
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    p = x * x - y * Fraction(1, 2) + MultiPoly.constant(2, 3)
    assert p.degree == 2
    assert not p.is_homogeneous()
    assert (p - p).is_zero
    assert p.to_text() == "(3) + (-1/2)*x2 + (1)*x1^2"
    assert p.homogeneous_part(2) == x * x
    assert (x * x).is_g_invariant()
    assert not p.is_g_invariant()


def test_polynomial_dimension_mismatch():
    """Test mixing variable counts raises."""
    with pytest.raises(DomainError):
        MultiPoly.variable(2, 0) + MultiPoly.variable(3, 0)


def test_monomials_of_degree():
    """Test the count of monomials of degree m in d variables."""
    assert len(monomials_of_degree(3, 4)) == 15
    assert monomials_of_degree(2, 1) == [(0, 1), (1, 0)]


def test_dunkl_op_on_monomials(group1):
    """Test T x^n = [n]_κ x^{n−1} in one variable."""
    k = Fraction(1, 2)
    for n in range(1, 7):
        result = dunkl_op(group1, 0, MultiPoly.monomial((n,)))
        expected = n + (2 * k if n % 2 else 0)
        assert result == MultiPoly.monomial((n - 1,), expected)


def test_dunkl_op_index_check(group2):
    """Test coordinate indices are checked."""
    with pytest.raises(DomainError):
        dunkl_op(group2, 2, MultiPoly.variable(2, 0))
    with pytest.raises(DomainError):
        dunkl_op(group2, 0, MultiPoly.variable(3, 0))


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(terms=polys)
def test_dunkl_operators_commute(group2, terms):
    """Test T_1 T_2 P = T_2 T_1 P exactly."""
    p = MultiPoly(2, terms)
    assert dunkl_op(group2, 0, dunkl_op(group2, 1, p)) == dunkl_op(
        group2, 1, dunkl_op(group2, 0, p)
    )


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(terms=polys)
def test_commutator_with_variable(group2, terms):
    """Test [T_j, x_j] P = P + 2κ_j P∘σ_j."""
    p = MultiPoly(2, terms)
    for j in range(2):
        lhs = dunkl_op(group2, j, p.times_variable(j)) - dunkl_op(group2, j, p).times_variable(j)
        assert lhs == p + p.reflect(j) * (2 * group2.kappa_exact[j])


@settings(max_examples=30, deadline=None)
@given(group=kappas(3), terms=polys3)
def test_dunkl_operators_commute_random_kappa(group, terms):
    """Test T_i T_j P = T_j T_i P and [T_j, x_j] P = P + 2κ_j P∘σ_j in three variables."""
    p = MultiPoly(3, terms)
    for i in range(3):
        lhs = dunkl_op(group, i, p.times_variable(i)) - dunkl_op(group, i, p).times_variable(i)
        assert lhs == p + p.reflect(i) * (2 * group.kappa_exact[i])
        for j in range(i + 1, 3):
            assert dunkl_op(group, i, dunkl_op(group, j, p)) == dunkl_op(
                group, j, dunkl_op(group, i, p)
            )


@settings(max_examples=10, deadline=None)
@given(group=st.one_of(kappas(2), kappas(3)))
def test_h_harmonics_random_kappa(group):
    """Test the exact basis is annihilated by Δ_κ for random rational κ."""
    basis = build_basis(group, 3, exact=True)
    for m in range(4):
        assert basis.dim(m) == harmonic_dimension(group.d, m)
    for _, _, y in basis.items():
        assert dunkl_laplacian(group, y.poly).is_zero


def test_laplacian_of_norm_squared(group2):
    """Test Δ_κ |x|² = 2d + 4γ."""
    r2 = MultiPoly.monomial((2, 0)) + MultiPoly.monomial((0, 2))
    assert dunkl_laplacian(group2, r2) == MultiPoly.constant(2, 2 * 2 + 4 * group2.gamma_exact)


def test_directional(group2):
    """Test T_ξ is linear in ξ."""
    p = MultiPoly.monomial((3, 1)) + MultiPoly.monomial((0, 2))
    combo = dunkl_op(group2, 0, p) * 2 - dunkl_op(group2, 1, p) * Fraction(1, 3)
    assert dunkl_directional(group2, [2, "-1/3"], p) == combo
    with pytest.raises(DomainError):
        dunkl_directional(group2, [1], p)


def test_numeric_operator_matches_exact(group2):
    """Test the finite-difference T_j agrees with the exact operator on a polynomial."""
    p = MultiPoly.monomial((3, 0)) + MultiPoly.monomial((1, 2)) * 2 + MultiPoly.monomial((0, 1))
    rng = np.random.default_rng(3)
    x = rng.uniform(-1.0, 1.0, size=(20, 2))
    x[0, 0] = 0.0
    for j in range(2):
        numeric = dunkl_op_numeric(group2, j, p.evaluate, x)
        exact = dunkl_op(group2, j, p).evaluate(x)
        assert np.allclose(numeric, exact, atol=1e-6)


def test_kernel_eigen_property(group2):
    """Test T_j^x E_κ(x, y) = y_j E_κ(x, y)."""
    y = np.array([0.7, -1.2])
    x = np.array([[0.3, 0.4], [-0.8, 1.1], [1.5, -0.2]])
    func = lambda pts: dunkl_kernel(group2, pts, y)  # noqa: E731
    for j in range(2):
        lhs = dunkl_op_numeric(group2, j, func, x, step=1e-4)
        assert np.allclose(lhs, y[j] * func(x), rtol=1e-6)


def test_kernel_symmetry_and_origin(group2):
    """Test E(x, y) = E(y, x), E(0, y) = 1 and classical reduction to e^{⟨x,y⟩}."""
    x = np.array([0.5, -1.5])
    y = np.array([2.0, 0.25])
    assert dunkl_kernel(group2, x, y) == pytest.approx(dunkl_kernel(group2, y, x))
    assert dunkl_kernel(group2, np.zeros(2), y) == pytest.approx(1.0)
    classical = ReflectionGroupZ2d.classical(2)
    assert dunkl_kernel(classical, x, y) == pytest.approx(np.exp(x @ y))


@pytest.mark.parametrize("z", [-3.0, -0.5, 0.0, 0.8, 4.0])
def test_kernel_against_series(z):
    """Test the Bessel form of E_κ matches its power series."""
    group = ReflectionGroupZ2d.from_kappa(["3/5"])
    closed = dunkl_kernel(group, np.array([z]), np.array([1.0]))
    assert closed == pytest.approx(dunkl_kernel_series_1d("3/5", z), rel=1e-12)


def test_kernel_overflow(group2):
    """Test overflow raises while the log kernel stays finite."""
    x = np.array([40.0, 40.0])
    assert np.isfinite(log_dunkl_kernel(group2, x, x))
    with pytest.raises(RangeError):
        dunkl_kernel(group2, x, x)
