"""
Scalar special functions: Laguerre and Gegenbauer polynomials, modified Bessel
functions of real order, Gamma and Beta.

All functions accept scalars or numpy arrays for the argument and return the same
shape (a Python float for scalar input).
"""

import logging
import math
from fractions import Fraction
from typing import List, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from dunkl_probe.errors import DomainError, RangeError

logger = logging.getLogger(__name__)

FloatOrArray = Union[float, NDArray[np.float64]]

MAX_DEGREE = 512

# Power series below, scipy's scaled Amos routine above.
BESSEL_SERIES_SWITCH = 15.0
_BESSEL_SERIES_TERMS = 96
_EXP_LIMIT = 700.0


def _as_array(x: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(x, dtype=float)


def _as_output(values: NDArray[np.float64], like: ArrayLike) -> FloatOrArray:
    if np.ndim(like) == 0:
        return float(values)
    return values


def _check_degree(n: int) -> None:
    if n < 0:
        raise DomainError(f"Polynomial degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise DomainError(f"Polynomial degree {n} exceeds cap {MAX_DEGREE}")


# Laguerre


def laguerre_table(k_max: int, delta: float, x: ArrayLike) -> NDArray[np.float64]:
    """
    Evaluate L_0^δ, ..., L_{k_max}^δ at x by the three-term recurrence.

    Args:
        k_max: Highest degree
        delta: Laguerre parameter, δ > −1
        x: Evaluation points

    Returns:
        Array of shape (k_max + 1,) + shape(x)

    Raises:
        DomainError: If δ ≤ −1 or k_max out of range
    """
    _check_degree(k_max)
    if delta <= -1.0:
        raise DomainError(f"Laguerre parameter must satisfy delta > -1, got {delta}")

    xs = _as_array(x)
    table = np.empty((k_max + 1,) + xs.shape)
    table[0] = 1.0
    if k_max >= 1:
        table[1] = 1.0 + delta - xs
    for k in range(1, k_max):
        table[k + 1] = ((2 * k + 1 + delta - xs) * table[k] - (k + delta) * table[k - 1]) / (k + 1)
    return table


def laguerre_coefficients(k: int, delta: Fraction) -> List[Fraction]:
    """
    Exact coefficients of L_k^δ(t) in powers of t, for rational δ.

    L_k^δ(t) = Σ_i (−1)^i binom(k+δ, k−i) t^i / i!
    """
    _check_degree(k)
    coeffs = []
    for i in range(k + 1):
        binom = Fraction(1)
        for j in range(1, k - i + 1):
            binom *= (delta + i + j) / j
        sign = -1 if i % 2 else 1
        coeffs.append(sign * binom / math.factorial(i))
    return coeffs


def laguerre_poly(k: int, delta: float, x: ArrayLike) -> FloatOrArray:
    """
    Value of the generalized Laguerre polynomial L_k^δ(x).

    Args:
        k: Degree
        delta: Parameter, δ > −1
        x: Argument (scalar or array)

    Returns:
        L_k^δ(x)
    """
    return _as_output(laguerre_table(k, delta, x)[k], x)


# Gegenbauer


def gegenbauer_poly(m: int, lam: float, t: ArrayLike) -> FloatOrArray:
    """
    Value of the Gegenbauer polynomial C_m^λ(t).

    At λ = 0 the polynomial is defined by the limit lim C_m^λ/λ = (2/m) T_m for m ≥ 1
    and 1 for m = 0, so that C_m^0(t)/C_m^0(1) = T_m(t).

    Args:
        m: Degree
        lam: Parameter, λ > −1/2
        t: Argument

    Returns:
        C_m^λ(t)

    Raises:
        DomainError: If λ ≤ −1/2
    """
    _check_degree(m)
    if lam <= -0.5:
        raise DomainError(f"Gegenbauer parameter must satisfy lambda > -1/2, got {lam}")

    ts = _as_array(t)
    if m == 0:
        return _as_output(np.ones_like(ts), t)

    if lam == 0.0:
        prev, cur = np.ones_like(ts), ts.copy()
        for n in range(1, m):
            prev, cur = cur, 2.0 * ts * cur - prev
        return _as_output(2.0 / m * cur, t)

    prev, cur = np.ones_like(ts), 2.0 * lam * ts
    for n in range(1, m):
        prev, cur = cur, (2.0 * (n + lam) * ts * cur - (n + 2.0 * lam - 1.0) * prev) / (n + 1)
    return _as_output(cur, t)


def gegenbauer_at_one(m: int, lam: float) -> float:
    """C_m^λ(1) = Γ(m+2λ)/(Γ(2λ) m!), with the Chebyshev limit at λ = 0."""
    _check_degree(m)
    if lam <= -0.5:
        raise DomainError(f"Gegenbauer parameter must satisfy lambda > -1/2, got {lam}")
    if m == 0:
        return 1.0
    if lam == 0.0:
        return 2.0 / m
    return float(special.poch(2.0 * lam, m) / special.factorial(m))


# Gamma / Beta


def log_gamma(x: ArrayLike) -> FloatOrArray:
    """ln Γ(x) for x > 0."""
    xs = _as_array(x)
    if np.any(xs <= 0.0):
        raise DomainError(f"log_gamma requires positive arguments, got {x}")
    return _as_output(special.gammaln(xs), x)


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) for a, b > 0."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"beta requires positive arguments, got ({a}, {b})")
    return float(special.betaln(a, b))


def beta(a: float, b: float) -> float:
    """B(a, b) = Γ(a)Γ(b)/Γ(a+b) for a, b > 0."""
    return float(np.exp(log_beta(a, b)))


# Modified Bessel I


def _check_bessel_args(delta: float, zs: NDArray[np.float64]) -> None:
    if delta <= -1.0:
        raise DomainError(f"Bessel order must satisfy delta > -1, got {delta}")
    if np.any(zs < 0.0):
        raise DomainError("Bessel argument must be nonnegative")


def _ratio_series(delta: float, zs: NDArray[np.float64]) -> NDArray[np.float64]:
    """I_δ(z)/z^δ by its power series; every term is positive."""
    q = 0.25 * zs * zs
    term = np.full_like(zs, np.exp(-delta * np.log(2.0) - special.gammaln(delta + 1.0)))
    total = term.copy()
    for k in range(1, _BESSEL_SERIES_TERMS):
        term = term * q / (k * (k + delta))
        total += term
    return total


def log_bessel_i_ratio(delta: float, z: ArrayLike) -> FloatOrArray:
    """
    ln(I_δ(z)/z^δ), finite for every z ≥ 0 including z = 0.

    This is the entire function that appears in the Dunkl and Laguerre kernels.
    """
    zs = _as_array(z)
    _check_bessel_args(delta, zs)
    out = np.empty_like(zs)
    small = zs <= BESSEL_SERIES_SWITCH
    out[small] = np.log(_ratio_series(delta, zs[small]))
    big = ~small
    if np.any(big):
        zb = zs[big]
        out[big] = np.log(special.ive(delta, zb)) + zb - delta * np.log(zb)
    return _as_output(out, z)


def bessel_i_ratio(delta: float, z: ArrayLike) -> FloatOrArray:
    """I_δ(z)/z^δ; raises RangeError where the value overflows."""
    logs = _as_array(log_bessel_i_ratio(delta, z))
    if np.any(logs > _EXP_LIMIT):
        raise RangeError("I_delta(z)/z^delta overflows; use log_bessel_i_ratio")
    return _as_output(np.exp(logs), z)


def log_bessel_i(delta: float, z: ArrayLike) -> FloatOrArray:
    """ln I_δ(z) for z > 0 (−inf at z = 0 when δ > 0)."""
    zs = _as_array(z)
    _check_bessel_args(delta, zs)
    with np.errstate(divide="ignore"):
        out = _as_array(log_bessel_i_ratio(delta, zs)) + delta * np.log(zs)
    if delta == 0.0:
        out = np.where(zs == 0.0, 0.0, out)
    return _as_output(out, z)


def bessel_i_scaled(delta: float, z: ArrayLike) -> FloatOrArray:
    """e^{−z} I_δ(z); the companion of bessel_i that never overflows."""
    zs = _as_array(z)
    _check_bessel_args(delta, zs)
    out = np.empty_like(zs)
    small = zs <= BESSEL_SERIES_SWITCH
    zsm = zs[small]
    with np.errstate(divide="ignore"):
        out[small] = _ratio_series(delta, zsm) * np.power(zsm, delta) * np.exp(-zsm)
    out[~small] = special.ive(delta, zs[~small])
    return _as_output(out, z)


def bessel_i(delta: float, z: ArrayLike) -> FloatOrArray:
    """
    Modified Bessel function of the first kind I_δ(z) for real order δ > −1.

    Power series for z ≤ 15 and scipy's exponentially scaled ``ive`` beyond.

    Args:
        delta: Order, δ > −1
        z: Argument, z ≥ 0

    Returns:
        I_δ(z)

    Raises:
        DomainError: For δ ≤ −1 or negative z
        RangeError: If e^z overflows; ln I_δ(z) is available from log_bessel_i
    """
    zs = _as_array(z)
    _check_bessel_args(delta, zs)
    if np.any(zs > _EXP_LIMIT):
        raise RangeError(f"I_{delta}(z) overflows for z > {_EXP_LIMIT}; use log_bessel_i")

    out = np.empty_like(zs)
    small = zs <= BESSEL_SERIES_SWITCH
    zsm = zs[small]
    with np.errstate(divide="ignore"):
        out[small] = _ratio_series(delta, zsm) * np.power(zsm, delta)
    zb = zs[~small]
    out[~small] = special.ive(delta, zb) * np.exp(zb)
    return _as_output(out, z)


def bessel_i_series(delta: float, z: ArrayLike) -> FloatOrArray:
    """Power-series branch alone, exposed for the crossover continuity check."""
    zs = _as_array(z)
    _check_bessel_args(delta, zs)
    with np.errstate(divide="ignore"):
        return _as_output(_ratio_series(delta, zs) * np.power(zs, delta), z)
