"""
Reflection group ℤ₂^d, exact polynomials, symbolic Dunkl operators, the weight h_κ²
and the Dunkl kernel E_κ.

Coordinates are indexed from 0 in code; reports label them from 1.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from dunkl_probe.errors import DomainError, RangeError
from dunkl_probe.specfun import log_bessel_i_ratio

logger = logging.getLogger(__name__)

Rational = Union[Fraction, int, float, str]
Exponent = Tuple[int, ...]
FloatOrArray = Union[float, NDArray[np.float64]]

# Denominators above this switch h-harmonic construction to floating nullspaces.
MAX_EXACT_DENOMINATOR = 10**6
_EXP_LIMIT = 700.0


def parse_rational(value: Rational) -> Fraction:
    """
    Exact rational from a Fraction, int, decimal float or a string such as "3/5".

    Floats go through their shortest repr, so 0.6 becomes 3/5.
    """
    try:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a multiplicity")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            if not np.isfinite(value):
                raise ValueError("not finite")
            return Fraction(repr(value))
        return Fraction(str(value).strip())
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise DomainError(f"Cannot read {value!r} as a rational number: {e}")


# Polynomials


class MultiPoly:
    """
    Multivariate polynomial in x_1..x_d with exact rational coefficients.

    Stored as a map from exponent tuples to nonzero Fractions; instances are immutable.
    """

    __slots__ = ("_d", "_terms")

    def __init__(self, d: int, terms: Optional[Mapping[Exponent, Rational]] = None) -> None:
        if d < 1:
            raise DomainError(f"Polynomial needs at least one variable, got d={d}")
        clean: Dict[Exponent, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != d or any(e < 0 for e in exps):
                raise DomainError(f"Bad exponent {exps} for d={d}")
            c = parse_rational(coeff)
            if c != 0:
                clean[tuple(int(e) for e in exps)] = c
        self._d = d
        self._terms = clean

    @classmethod
    def zero(cls, d: int) -> "MultiPoly":
        return cls(d)

    @classmethod
    def constant(cls, d: int, value: Rational) -> "MultiPoly":
        return cls(d, {(0,) * d: value})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Rational = 1) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, d: int, j: int) -> "MultiPoly":
        exps = [0] * d
        exps[j] = 1
        return cls.monomial(exps)

    @property
    def d(self) -> int:
        return self._d

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Maximum total degree; −1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def is_even_in(self, j: int) -> bool:
        return all(e[j] % 2 == 0 for e in self._terms)

    def is_g_invariant(self) -> bool:
        """Invariant under every sign flip, i.e. even in each coordinate."""
        return all(e % 2 == 0 for exps in self._terms for e in exps)

    def homogeneous_part(self, m: int) -> "MultiPoly":
        return MultiPoly(self._d, {e: c for e, c in self._terms.items() if sum(e) == m})

    # arithmetic

    def _check_same(self, other: "MultiPoly") -> None:
        if other._d != self._d:
            raise DomainError(f"Variable count mismatch: {self._d} vs {other._d}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_same(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self._d, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self._d, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: Union["MultiPoly", Rational]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            s = parse_rational(other)
            return MultiPoly(self._d, {e: c * s for e, c in self._terms.items()})
        self._check_same(other)
        out: Dict[Exponent, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self._terms.items(), other._terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self._d, out)

    def __rmul__(self, other: Rational) -> "MultiPoly":
        return self * other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._d == other._d and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._d, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        return f"MultiPoly(d={self._d}, {self.to_text()})"

    # calculus

    def derivative(self, j: int) -> "MultiPoly":
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            if e[j] > 0:
                ne = list(e)
                ne[j] -= 1
                out[tuple(ne)] = c * e[j]
        return MultiPoly(self._d, out)

    def reflect(self, j: int) -> "MultiPoly":
        """P ∘ σ_j, the sign flip of coordinate j."""
        return MultiPoly(self._d, {e: (-c if e[j] % 2 else c) for e, c in self._terms.items()})

    def times_variable(self, j: int) -> "MultiPoly":
        out = {}
        for e, c in self._terms.items():
            ne = list(e)
            ne[j] += 1
            out[tuple(ne)] = c
        return MultiPoly(self._d, out)

    def divide_by_variable(self, j: int) -> "MultiPoly":
        """Exact quotient P / x_j; every term must contain x_j."""
        out = {}
        for e, c in self._terms.items():
            if e[j] == 0:
                raise DomainError(f"x_{j + 1} does not divide the polynomial exactly")
            ne = list(e)
            ne[j] -= 1
            out[tuple(ne)] = c
        return MultiPoly(self._d, out)

    # evaluation

    def evaluate(self, points: ArrayLike) -> NDArray[np.float64]:
        """Values at points of shape (..., d)."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self._d:
            raise DomainError(f"Points must have last axis {self._d}, got {pts.shape}")
        if not self._terms:
            return np.zeros(pts.shape[:-1])
        exps = np.array(list(self._terms.keys()), dtype=float)
        coeffs = np.array([float(c) for c in self._terms.values()])
        monos = np.prod(pts[..., None, :] ** exps, axis=-1)
        return monos @ coeffs

    def to_text(self) -> str:
        """Canonical text: terms in ascending exponent order, exact rational coefficients."""
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            factors = [f"({c})"]
            factors += [f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(e) if k]
            parts.append("*".join(factors))
        return " + ".join(parts)


def monomials_of_degree(d: int, m: int) -> List[Exponent]:
    """All exponent tuples of total degree m, in ascending order."""
    out = [
        e
        for e in itertools.product(range(m + 1), repeat=d)
        if sum(e) == m
    ]
    return sorted(out)


# Group


@dataclass(frozen=True)
class ReflectionGroupZ2d:
    """
    The group ℤ₂^d generated by the coordinate sign flips σ_j, with multiplicities κ_j.

    Multiplicities are stored exactly; the float view is derived from them.
    """

    kappa_exact: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.kappa_exact) < 1:
            raise DomainError("Group needs dimension d >= 1")
        if any(k < 0 for k in self.kappa_exact):
            raise DomainError(f"Multiplicities must be nonnegative, got {self.kappa_labels}")

    @classmethod
    def from_kappa(cls, kappa: Sequence[Rational]) -> "ReflectionGroupZ2d":
        return cls(tuple(parse_rational(k) for k in kappa))

    @classmethod
    def classical(cls, d: int) -> "ReflectionGroupZ2d":
        return cls((Fraction(0),) * d)

    @property
    def d(self) -> int:
        return len(self.kappa_exact)

    @property
    def kappa(self) -> Tuple[float, ...]:
        return tuple(float(k) for k in self.kappa_exact)

    @property
    def kappa_labels(self) -> List[str]:
        return [str(k) for k in self.kappa_exact]

    @property
    def gamma_exact(self) -> Fraction:
        return sum(self.kappa_exact, Fraction(0))

    @property
    def gamma(self) -> float:
        return float(self.gamma_exact)

    @property
    def lambda_kappa(self) -> float:
        """λ_κ = γ + (d − 2)/2."""
        return self.gamma + (self.d - 2) / 2.0

    @property
    def order(self) -> int:
        return 2**self.d

    @property
    def is_classical(self) -> bool:
        return all(k == 0 for k in self.kappa_exact)

    @property
    def supports_exact(self) -> bool:
        """Whether rational nullspaces stay cheap for these multiplicities."""
        return all(k.denominator <= MAX_EXACT_DENOMINATOR for k in self.kappa_exact)

    def sign_patterns(self) -> NDArray[np.float64]:
        """All 2^d group elements as sign vectors."""
        return np.array(list(itertools.product((1.0, -1.0), repeat=self.d)))

    def reflect(self, x: ArrayLike, j: int) -> NDArray[np.float64]:
        out = np.array(x, dtype=float, copy=True)
        out[..., j] = -out[..., j]
        return out


def h_weight_sq(group: ReflectionGroupZ2d, x: ArrayLike) -> FloatOrArray:
    """h_κ²(x) = Π_j |x_j|^{2κ_j}; vanishes on coordinate hyperplanes when κ_j > 0."""
    pts = np.asarray(x, dtype=float)
    vals = np.prod(np.abs(pts) ** (2.0 * np.array(group.kappa)), axis=-1)
    return float(vals) if np.ndim(vals) == 0 else vals


# Symbolic Dunkl operators


def _check_poly(group: ReflectionGroupZ2d, poly: MultiPoly) -> None:
    if poly.d != group.d:
        raise DomainError(f"Polynomial in {poly.d} variables for a group of dimension {group.d}")


def dunkl_op(group: ReflectionGroupZ2d, j: int, poly: MultiPoly) -> MultiPoly:
    """
    T_j P = ∂_j P + κ_j (P − P∘σ_j)/x_j, computed exactly.

    The difference P − P∘σ_j is odd in x_j, so the division is exact.
    """
    _check_poly(group, poly)
    if not 0 <= j < group.d:
        raise DomainError(f"Coordinate index {j} out of range for d={group.d}")
    out = poly.derivative(j)
    kj = group.kappa_exact[j]
    if kj != 0:
        out = out + (poly - poly.reflect(j)).divide_by_variable(j) * kj
    return out


def dunkl_gradient(group: ReflectionGroupZ2d, poly: MultiPoly) -> List[MultiPoly]:
    return [dunkl_op(group, j, poly) for j in range(group.d)]


def dunkl_laplacian(group: ReflectionGroupZ2d, poly: MultiPoly) -> MultiPoly:
    """Δ_κ P = Σ_j T_j² P."""
    out = MultiPoly.zero(group.d)
    for j in range(group.d):
        out = out + dunkl_op(group, j, dunkl_op(group, j, poly))
    return out


def dunkl_directional(
    group: ReflectionGroupZ2d, xi: Sequence[Rational], poly: MultiPoly
) -> MultiPoly:
    """T_ξ P = Σ_j ξ_j T_j P."""
    if len(xi) != group.d:
        raise DomainError(f"Direction must have {group.d} components, got {len(xi)}")
    out = MultiPoly.zero(group.d)
    for j, c in enumerate(xi):
        coeff = parse_rational(c)
        if coeff != 0:
            out = out + dunkl_op(group, j, poly) * coeff
    return out


def dunkl_op_numeric(
    group: ReflectionGroupZ2d,
    j: int,
    func: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    x: ArrayLike,
    step: float = 1e-5,
) -> NDArray[np.float64]:
    """
    Pointwise T_j f for a sampled smooth f, by central differences.

    On the hyperplane x_j = 0 the difference quotient is replaced by its smooth
    extension 2∂_j f.
    """
    pts = np.asarray(x, dtype=float)
    e = np.zeros(group.d)
    e[j] = step
    deriv = (func(pts + e) - func(pts - e)) / (2.0 * step)
    xj = pts[..., j]
    near = np.abs(xj) < step
    safe = np.where(near, 1.0, xj)
    quotient = np.where(near, 2.0 * deriv, (func(pts) - func(group.reflect(pts, j))) / safe)
    return deriv + group.kappa[j] * quotient


# Dunkl kernel


def _log_kernel_1d(kappa: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
    """ln E_κ for one coordinate, z = x_j y_j."""
    if kappa == 0.0:
        return z.copy()
    az = np.abs(z)
    log_even = (
        special.gammaln(kappa + 0.5)
        + (kappa - 0.5) * np.log(2.0)
        + np.asarray(log_bessel_i_ratio(kappa - 0.5, az))
    )
    with np.errstate(divide="ignore"):
        log_abs_q = (
            np.asarray(log_bessel_i_ratio(kappa + 0.5, az))
            - np.asarray(log_bessel_i_ratio(kappa - 0.5, az))
            + np.log(az)
        )
    q = np.sign(z) * np.exp(log_abs_q)
    return log_even + np.log1p(q)


def log_dunkl_kernel(group: ReflectionGroupZ2d, x: ArrayLike, y: ArrayLike) -> FloatOrArray:
    """
    ln E_κ(x, y), the sum over coordinates of the one-dimensional log kernels.

    Each factor is j_{κ−1/2}(z) + z/(2κ+1) j_{κ+1/2}(z) with j_α the normalized
    modified Bessel function; it is accumulated in log space.
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    z = xs * ys
    if z.shape[-1] != group.d:
        raise DomainError(f"Points must have last axis {group.d}")
    total = sum(_log_kernel_1d(k, z[..., j]) for j, k in enumerate(group.kappa))
    out = np.asarray(total, dtype=float)
    return float(out) if out.ndim == 0 else out


def dunkl_kernel(group: ReflectionGroupZ2d, x: ArrayLike, y: ArrayLike) -> FloatOrArray:
    """
    Dunkl kernel E_κ(x, y) for real x, y.

    Raises:
        RangeError: If the value overflows; log_dunkl_kernel stays finite
    """
    logs = np.asarray(log_dunkl_kernel(group, x, y))
    if np.any(logs > _EXP_LIMIT):
        raise RangeError("E_kappa(x, y) overflows; use log_dunkl_kernel")
    out = np.exp(logs)
    return float(out) if out.ndim == 0 else out


def dunkl_kernel_series_1d(kappa: Rational, z: float, terms: int = 200) -> float:
    """
    E_κ(z) from the eigen-equation T E = y E in one variable: Σ z^n / b_n.

    b_n = Π_{i ≤ n} [i]_κ with [i]_κ = i + 2κ for odd i and i for even i.
    """
    k = float(parse_rational(kappa))
    total, term = 1.0, 1.0
    for i in range(1, terms):
        term *= z / (i + 2.0 * k * (i % 2))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total
