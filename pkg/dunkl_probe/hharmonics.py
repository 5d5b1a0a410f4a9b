"""
h-harmonics for ℤ₂^d.

Solid h-harmonics of degree m are the exact nullspace of the symbolic Dunkl Laplacian on
homogeneous polynomials; they are orthonormalized on (S^{d−1}, h_κ² dσ) with the closed-form
sphere moments. This module also holds the spherical Dunkl gradient ∇_0^κ, the operator
ρ^κ, spherical projections f ↦ f_{m,j}(r), the Funk–Hecke identities and the checks that
tie the oscillator semigroup to the Laguerre semigroups.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, special

from dunkl_probe.dunkl_core import (
    MultiPoly,
    ReflectionGroupZ2d,
    dunkl_gradient,
    dunkl_kernel,
    dunkl_laplacian,
    dunkl_op,
    monomials_of_degree,
)
from dunkl_probe.errors import ConstructionError, DomainError
from dunkl_probe.hermite_engine import SpectralCoeffs, apply_heat, synthesize
from dunkl_probe.laguerre_ops import LaguerreCoeffs, log_heat_kernel, psi_table
from dunkl_probe.quadrature import (
    SphereRule,
    gauss_jacobi,
    radial_rule,
    sphere_moment,
    sphere_rule,
)
from dunkl_probe.specfun import bessel_i_ratio, gegenbauer_at_one, gegenbauer_poly

logger = logging.getLogger(__name__)

PointFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]

MAX_HARMONIC_DEGREE = 16
MAX_HARMONIC_DIMENSION = 4

# Residual allowed for Δ_κ Y when the nullspace is computed in floating point.
FLOAT_NULLSPACE_TOL = 1e-10
_REFINE_ABOVE = 1e-13

# Radial profile values below this fraction of the largest sampled |f(rω)| are round-off.
PROFILE_NOISE_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class SolidHHarmonic:
    """Homogeneous polynomial Y of degree m with Δ_κ Y = 0."""

    degree: int
    poly: MultiPoly
    g_invariant: bool
    exact: bool = True

    def __post_init__(self) -> None:
        if not self.poly.is_zero and (
            not self.poly.is_homogeneous() or self.poly.degree != self.degree
        ):
            raise DomainError(f"Polynomial is not homogeneous of degree {self.degree}")

    def evaluate(self, points: ArrayLike) -> NDArray[np.float64]:
        return self.poly.evaluate(points)


@dataclass(frozen=True, eq=False)
class HHarmonicBasis:
    """
    Orthonormal h-harmonics Y_{m,0}, ..., Y_{m,d(m)−1} for m ≤ m_max.

    Within each degree the G-invariant members come first; ``spans`` keeps the exact
    nullspace vectors the members are combined from.
    """

    group: ReflectionGroupZ2d
    m_max: int
    members: Mapping[int, Tuple[SolidHHarmonic, ...]]
    spans: Mapping[int, Tuple[MultiPoly, ...]]
    combinations: Mapping[int, NDArray[np.float64]]
    gram_residual: Mapping[int, float]
    exact: bool

    def dim(self, m: int) -> int:
        return len(self.members[m])

    def invariant_dim(self, m: int) -> int:
        return sum(1 for y in self.members[m] if y.g_invariant)

    def member(self, m: int, j: int) -> SolidHHarmonic:
        return self.members[m][j]

    def invariant_members(self, m: int) -> Tuple[SolidHHarmonic, ...]:
        return tuple(y for y in self.members[m] if y.g_invariant)

    def items(self, invariant_only: bool = False) -> Iterator[Tuple[int, int, SolidHHarmonic]]:
        for m in range(self.m_max + 1):
            for j, y in enumerate(self.members[m]):
                if y.g_invariant or not invariant_only:
                    yield m, j, y

    def sphere_rule(self, n: Optional[int] = None) -> SphereRule:
        return _cached_sphere_rule(self.group.d, self.group.kappa, n or self.m_max + 4)

    def to_dict(self) -> Dict[str, Any]:
        degrees = []
        for m in range(self.m_max + 1):
            degrees.append(
                {
                    "m": m,
                    "dim": self.dim(m),
                    "invariant_dim": self.invariant_dim(m),
                    "gram_residual": float(self.gram_residual[m]),
                    "span": [p.to_text() for p in self.spans[m]],
                    "members": [
                        {
                            "j": j + 1,
                            "g_invariant": y.g_invariant,
                            "coefficients": self.combinations[m][j].tolist(),
                            "text": y.poly.to_text(),
                        }
                        for j, y in enumerate(self.members[m])
                    ],
                }
            )
        return {
            "d": self.group.d,
            "kappa": self.group.kappa_labels,
            "m_max": self.m_max,
            "exact": self.exact,
            "degrees": degrees,
        }


@functools.lru_cache(maxsize=16)
def _cached_sphere_rule(d: int, kappa: Tuple[float, ...], n: int) -> SphereRule:
    return sphere_rule(d, kappa, n)


# Dimensions


def _even_count(d: int, m: int) -> int:
    if m < 0:
        return 0
    return sum(1 for e in monomials_of_degree(d, m) if all(a % 2 == 0 for a in e))


def harmonic_dimension(d: int, m: int) -> int:
    """d(m) = dim P_m − dim P_{m−2}."""
    below = len(monomials_of_degree(d, m - 2)) if m >= 2 else 0
    return len(monomials_of_degree(d, m)) - below


def invariant_dimension(d: int, m: int) -> int:
    """d₁(m): h-harmonics of degree m that are even in every coordinate."""
    return _even_count(d, m) - _even_count(d, m - 2)


# Construction


def _parity_classes(d: int, m: int) -> List[Tuple[int, ...]]:
    """Parity vectors of degree-m monomials; the all-even class sorts first."""
    return sorted(
        eps
        for eps in itertools.product((0, 1), repeat=d)
        if sum(eps) <= m and sum(eps) % 2 == m % 2
    )


def _class_monomials(d: int, m: int, eps: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    if m < 0:
        return []
    return [e for e in monomials_of_degree(d, m) if all(a % 2 == b for a, b in zip(e, eps))]


def _laplacian_matrix(
    group: ReflectionGroupZ2d, sources: List[Tuple[int, ...]], targets: List[Tuple[int, ...]]
) -> List[List[Fraction]]:
    """Rows indexed by targets, columns by sources; Δ_κ keeps every parity class."""
    position = {e: i for i, e in enumerate(targets)}
    rows = [[Fraction(0)] * len(sources) for _ in targets]
    for col, e in enumerate(sources):
        for te, c in dunkl_laplacian(group, MultiPoly.monomial(e)).items():
            rows[position[te]][col] = c
    return rows


def _exact_nullspace(rows: List[List[Fraction]], n_cols: int) -> List[List[Fraction]]:
    if not rows:
        return [[Fraction(int(i == k)) for i in range(n_cols)] for k in range(n_cols)]
    matrix = sympy.Matrix(
        [[sympy.Rational(c.numerator, c.denominator) for c in row] for row in rows]
    )
    return [[Fraction(int(v.p), int(v.q)) for v in vec] for vec in matrix.nullspace()]


def _float_nullspace(rows: List[List[Fraction]], n_cols: int) -> List[List[Fraction]]:
    if not rows:
        return [[Fraction(int(i == k)) for i in range(n_cols)] for k in range(n_cols)]
    matrix = np.array([[float(c) for c in row] for row in rows])
    basis = linalg.null_space(matrix)
    return [[Fraction(float(v)) for v in basis[:, k]] for k in range(basis.shape[1])]


def _sphere_gram(group: ReflectionGroupZ2d, polys: Sequence[MultiPoly]) -> NDArray[np.float64]:
    moments: Dict[Tuple[int, ...], float] = {}

    def moment(beta: Tuple[int, ...]) -> float:
        if beta not in moments:
            moments[beta] = sphere_moment(group.kappa, beta)
        return moments[beta]

    terms = [[(e, float(c)) for e, c in p.items()] for p in polys]
    n = len(polys)
    gram = np.zeros((n, n))
    for a in range(n):
        for b in range(a, n):
            total = 0.0
            for e1, c1 in terms[a]:
                for e2, c2 in terms[b]:
                    total += c1 * c2 * moment(tuple(x + y for x, y in zip(e1, e2)))
            gram[a, b] = gram[b, a] = total
    return gram


def _orthonormalizer(gram: NDArray[np.float64], label: str) -> NDArray[np.float64]:
    """C with C G Cᵀ = I, by Cholesky and one refinement pass."""
    try:
        lower = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        eig = np.linalg.eigvalsh(gram)
        raise ConstructionError(
            f"Gram matrix for {label} is not positive definite (smallest eigenvalue {eig[0]:.3e})"
        )
    comb = linalg.solve_triangular(lower, np.eye(len(gram)), lower=True)
    again = comb @ gram @ comb.T
    if np.max(np.abs(again - np.eye(len(gram)))) > _REFINE_ABOVE:
        lower2 = np.linalg.cholesky(again)
        comb = linalg.solve_triangular(lower2, comb, lower=True)
    return comb


def build_basis(
    group: ReflectionGroupZ2d, m_max: int, exact: Optional[bool] = None
) -> HHarmonicBasis:
    """
    Orthonormal h-harmonics of degrees 0..m_max.

    Per degree and parity class the nullspace of Δ_κ: P_m → P_{m−2} is computed with rational
    elimination (or in floating point when the multiplicities have large denominators), then
    orthonormalized with the closed-form moments of h_κ² dσ.

    Args:
        group: Reflection group with 2 ≤ d ≤ 4
        m_max: Highest degree, at most 16
        exact: Force rational (True) or floating (False) nullspaces

    Returns:
        HHarmonicBasis with the G-invariant members first in each degree

    Raises:
        DomainError: If d or m_max is out of range
        ConstructionError: If a nullspace has the wrong dimension or the Gram matrix is singular
    """
    d = group.d
    if not 2 <= d <= MAX_HARMONIC_DIMENSION:
        raise DomainError(f"h-harmonic bases need 2 <= d <= {MAX_HARMONIC_DIMENSION}, got {d}")
    if not 0 <= m_max <= MAX_HARMONIC_DEGREE:
        raise DomainError(f"Degree cap must be in [0, {MAX_HARMONIC_DEGREE}], got {m_max}")
    use_exact = group.supports_exact if exact is None else exact
    nullspace = _exact_nullspace if use_exact else _float_nullspace

    members: Dict[int, Tuple[SolidHHarmonic, ...]] = {}
    spans: Dict[int, Tuple[MultiPoly, ...]] = {}
    combinations: Dict[int, NDArray[np.float64]] = {}
    residuals: Dict[int, float] = {}

    for m in range(m_max + 1):
        degree_members: List[SolidHHarmonic] = []
        degree_span: List[MultiPoly] = []
        blocks: List[NDArray[np.float64]] = []
        worst = 0.0
        for eps in _parity_classes(d, m):
            sources = _class_monomials(d, m, eps)
            targets = _class_monomials(d, m - 2, eps)
            vectors = nullspace(_laplacian_matrix(group, sources, targets), len(sources))
            expected = len(sources) - len(targets)
            if len(vectors) != expected:
                raise ConstructionError(
                    f"Nullspace of the Dunkl Laplacian at degree {m}, parity {eps} has "
                    f"dimension {len(vectors)}, expected {expected}"
                )
            span = [
                MultiPoly(d, {e: c for e, c in zip(sources, vec) if c != 0}) for vec in vectors
            ]
            if not use_exact:
                for p in span:
                    image = dunkl_laplacian(group, p)
                    leftover = max((abs(float(c)) for _, c in image.items()), default=0.0)
                    if leftover > FLOAT_NULLSPACE_TOL:
                        raise ConstructionError(
                            f"Floating nullspace at degree {m}, parity {eps} leaves residual "
                            f"{leftover:.3e}"
                        )

            gram = _sphere_gram(group, span)
            comb = _orthonormalizer(gram, f"degree {m}, parity {eps}")
            worst = max(worst, float(np.max(np.abs(comb @ gram @ comb.T - np.eye(len(span))))))

            invariant = not any(eps)
            for row in comb:
                poly = MultiPoly.zero(d)
                for coeff, p in zip(row, span):
                    poly = poly + p * Fraction(float(coeff))
                degree_members.append(SolidHHarmonic(m, poly, invariant, use_exact))
            degree_span.extend(span)
            blocks.append(comb)

        members[m] = tuple(degree_members)
        spans[m] = tuple(degree_span)
        combinations[m] = linalg.block_diag(*blocks) if blocks else np.zeros((0, 0))
        residuals[m] = worst
        logger.debug(
            f"Degree {m}: d(m)={len(degree_members)}, "
            f"d1(m)={sum(y.g_invariant for y in degree_members)}, gram residual {worst:.2e}"
        )

    return HHarmonicBasis(
        group=group,
        m_max=m_max,
        members=MappingProxyType(members),
        spans=MappingProxyType(spans),
        combinations=MappingProxyType(combinations),
        gram_residual=MappingProxyType(residuals),
        exact=use_exact,
    )


def gram_by_quadrature(basis: HHarmonicBasis, m: int, rule: Optional[SphereRule] = None) -> Any:
    """Gram matrix of the degree-m members on the sphere rule."""
    rule = rule or basis.sphere_rule()
    values = np.array([y.evaluate(rule.points) for y in basis.members[m]])
    return (values * rule.weights) @ values.T


# Spherical Dunkl gradient and ρ^κ


@functools.lru_cache(maxsize=512)
def _gradient_polys(group: ReflectionGroupZ2d, y: SolidHHarmonic) -> Tuple[MultiPoly, ...]:
    return tuple(dunkl_gradient(group, y.poly))


def _check_unit(omega: NDArray[np.float64]) -> None:
    if np.any(np.abs(np.linalg.norm(omega, axis=-1) - 1.0) > 1e-10):
        raise DomainError("Spherical operators need unit vectors")


def dunkl_gradient_values(
    group: ReflectionGroupZ2d, y: SolidHHarmonic, x: ArrayLike
) -> NDArray[np.float64]:
    """∇^κ Y at points x of shape (..., d); result has the same shape."""
    pts = np.asarray(x, dtype=float)
    return np.stack([g.evaluate(pts) for g in _gradient_polys(group, y)], axis=-1)


def sph_gradient(group: ReflectionGroupZ2d, y: SolidHHarmonic, omega: ArrayLike) -> Any:
    """
    ∇_0^κ Y(ω) = ∇^κ Y(ω) − m Y(ω) ω for unit ω.

    Follows from ∇^κ Y(rω) = m r^{m−1} Y(ω) ω + r^{m−1} ∇_0^κ Y(ω).
    """
    om = np.asarray(omega, dtype=float)
    _check_unit(om)
    grad = dunkl_gradient_values(group, y, om)
    return grad - y.degree * y.evaluate(om)[..., None] * om


def rho_op(group: ReflectionGroupZ2d, y: SolidHHarmonic, omega: ArrayLike) -> Any:
    """ρ^κ Y(ω) = Σ_j κ_j Y(σ_j ω)."""
    om = np.asarray(omega, dtype=float)
    out = np.zeros(om.shape[:-1])
    for j, k in enumerate(group.kappa):
        if k != 0.0:
            out = out + k * y.evaluate(group.reflect(om, j))
    return float(out) if out.ndim == 0 else out


# Identities on the sphere


@dataclass(frozen=True)
class Prop31Report:
    tangential: float
    radial: float
    divergence: float
    orthogonality: float
    euler: float
    pairs_checked: int

    @property
    def worst(self) -> float:
        return max(self.tangential, self.radial, self.divergence, self.orthogonality, self.euler)


def verify_prop31(
    group: ReflectionGroupZ2d,
    basis: HHarmonicBasis,
    degree_pairs: Optional[Sequence[Tuple[int, int]]] = None,
    rule: Optional[SphereRule] = None,
    radii: Sequence[float] = (0.5, 1.0, 2.0),
) -> Prop31Report:
    """
    Maximum residuals of the spherical gradient identities over the sphere-rule nodes.

    tangential: ⟨∇_0^κ Y, ω⟩ = γY − ρ^κY
    radial: ⟨∇^κ Y(rω), ω⟩ = r^{n−1}((n+γ)Y(ω) − ρ^κY(ω))
    divergence: Σ_j (∇_0^κ)_j(ω_j Y) = (d+γ−1)Y + ρ^κY
    orthogonality: ∫⟨∇_0^κ Y_n, ∇_0^κ Y_m⟩ h_κ² dσ = 0 for n ≠ m
    euler: Σ_j (∇_0)_j(ω_j Y) = (d−1)Y for the classical spherical gradient
    """
    rule = rule or basis.sphere_rule()
    om = rule.points
    d, gamma = group.d, group.gamma
    tangential = radial = divergence = euler = 0.0

    for n, _, y in basis.items():
        vals = y.evaluate(om)
        rho = rho_op(group, y, om)
        grad0 = sph_gradient(group, y, om)
        tangential = max(
            tangential, float(np.max(np.abs(np.sum(grad0 * om, axis=-1) - (gamma * vals - rho))))
        )
        for r in radii:
            lhs = np.sum(dunkl_gradient_values(group, y, r * om) * om, axis=-1)
            rhs = r ** (n - 1) * ((n + gamma) * vals - rho)
            radial = max(radial, float(np.max(np.abs(lhs - rhs))))

        # ω_j Y(ω) is the restriction of x_j Y(x), homogeneous of degree n + 1.
        div_kappa = np.zeros(len(om))
        div_classical = np.zeros(len(om))
        for j in range(d):
            lifted = y.poly.times_variable(j)
            div_kappa += dunkl_op(group, j, lifted).evaluate(om)
            div_classical += lifted.derivative(j).evaluate(om)
        div_kappa -= (n + 1) * vals
        div_classical -= (n + 1) * vals
        divergence = max(
            divergence, float(np.max(np.abs(div_kappa - ((d + gamma - 1.0) * vals + rho))))
        )
        euler = max(euler, float(np.max(np.abs(div_classical - (d - 1.0) * vals))))

    if degree_pairs is None:
        degree_pairs = [
            (a, b) for a in range(basis.m_max + 1) for b in range(a + 1, basis.m_max + 1)
        ]
    grads = {
        (m, j): sph_gradient(group, y, om) for m, j, y in basis.items()
    }
    orthogonality = 0.0
    count = 0
    for a, b in degree_pairs:
        if a == b:
            continue
        for ja in range(basis.dim(a)):
            for jb in range(basis.dim(b)):
                integrand = np.sum(grads[(a, ja)] * grads[(b, jb)], axis=-1)
                orthogonality = max(orthogonality, abs(float(rule.integrate(integrand))))
                count += 1

    return Prop31Report(tangential, radial, divergence, orthogonality, euler, count)


@dataclass(frozen=True)
class Prop32Result:
    m: int
    quotients: Tuple[float, ...]
    alt_candidate: float
    homogeneity_candidate: float

    @property
    def measured(self) -> float:
        return float(np.mean(self.quotients)) if self.quotients else 0.0

    @property
    def matches(self) -> str:
        """Which candidate the measurement agrees with: "m(m+2λ)", "m(m+λ)" or "neither"."""
        if abs(self.measured - self.homogeneity_candidate) <= 1e-8 * max(1.0, self.measured):
            return "m(m+2λ)"
        if abs(self.measured - self.alt_candidate) <= 1e-8 * max(1.0, self.measured):
            return "m(m+λ)"
        return "neither"


def rayleigh_quotient(
    group: ReflectionGroupZ2d, y: SolidHHarmonic, rule: SphereRule
) -> float:
    """∫|∇_0^κ Y|² h_κ² dσ / ∫ Y² h_κ² dσ on the sphere rule."""
    grad = sph_gradient(group, y, rule.points)
    num = float(rule.integrate(np.sum(grad * grad, axis=-1)))
    den = float(rule.integrate(y.evaluate(rule.points) ** 2))
    return num / den


def verify_prop32(
    group: ReflectionGroupZ2d, basis: HHarmonicBasis, m: int, rule: Optional[SphereRule] = None
) -> Prop32Result:
    """
    Rayleigh quotients of the G-invariant members of degree m next to m(m+λ_κ) and m(m+2λ_κ).

    Raises:
        DomainError: If degree m has no G-invariant member
    """
    if m > basis.m_max:
        raise DomainError(f"Degree {m} is beyond the basis cap {basis.m_max}")
    invariant = basis.invariant_members(m)
    if not invariant:
        raise DomainError(f"No G-invariant h-harmonics of degree {m} in dimension {group.d}")
    rule = rule or basis.sphere_rule()
    lam = group.lambda_kappa
    quotients = tuple(rayleigh_quotient(group, y, rule) for y in invariant)
    return Prop32Result(m, quotients, m * (m + lam), m * (m + 2.0 * lam))


@dataclass(frozen=True)
class SphericalEigenvalue:
    m: int
    measured: float
    alt_candidate: float
    homogeneity_candidate: float
    residual: float


def spherical_laplacian_eigenvalue(
    group: ReflectionGroupZ2d, y: SolidHHarmonic
) -> SphericalEigenvalue:
    """
    Eigenvalue μ of Δ_{κ,0} on Y, measured from Δ_κ(|x|²Y) = c Y.

    With Δ_κ = ∂_r² + (2λ_κ+1)/r ∂_r + r^{−2}Δ_{κ,0} applied to r^{m+2}Y(ω),
    μ = c − (m+2)(m+2λ_κ+2). The candidates are −m(m+λ_κ) and −m(m+2λ_κ).
    """
    m = y.degree
    r2 = MultiPoly.zero(group.d)
    for j in range(group.d):
        r2 = r2 + MultiPoly.variable(group.d, j).times_variable(j)
    image = dunkl_laplacian(group, r2 * y.poly)

    norm = sum((v * v for _, v in y.poly.items()), Fraction(0))
    if norm == 0:
        raise DomainError("The zero polynomial has no eigenvalue")
    overlap = sum((v * y.poly.terms.get(e, Fraction(0)) for e, v in image.items()), Fraction(0))
    c = overlap / norm
    leftover = image - y.poly * c
    residual = max((abs(float(v)) for _, v in leftover.items()), default=0.0)

    lam = group.gamma_exact + Fraction(group.d - 2, 2)
    mu = c - (m + 2) * (m + 2 * lam + 2)
    return SphericalEigenvalue(
        m=m,
        measured=float(mu),
        alt_candidate=float(-m * (m + lam)),
        homogeneity_candidate=float(-m * (m + 2 * lam)),
        residual=residual,
    )


# Spherical projections


@dataclass(frozen=True)
class RadialProjection:
    m: int
    j: int
    r: NDArray[np.float64]
    values: NDArray[np.float64]

    @property
    def tilde(self) -> NDArray[np.float64]:
        """f̃_{m,j}(r) = r^{−m} f_{m,j}(r)."""
        return self.values / self.r**self.m


def _sphere_samples(func: PointFunction, rule: SphereRule, r: NDArray[np.float64]) -> Any:
    pts = (r[:, None, None] * rule.points[None, :, :]).reshape(-1, rule.d)
    return np.asarray(func(pts), dtype=float).reshape(len(r), rule.size)


def project_radial(
    func: PointFunction,
    basis: HHarmonicBasis,
    m: int,
    j: int,
    r: ArrayLike,
    rule: Optional[SphereRule] = None,
) -> RadialProjection:
    """
    f_{m,j}(r) = ∫ f(rω) Y_{m,j}(ω) h_κ²(ω) dσ(ω) by the sphere rule.

    Raises:
        DomainError: If some r ≤ 0
    """
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rs <= 0.0):
        raise DomainError("Radial projections need r > 0")
    rule = rule or basis.sphere_rule()
    samples = _sphere_samples(func, rule, rs)
    weighted = rule.weights * basis.member(m, j).evaluate(rule.points)
    return RadialProjection(m, j, rs, samples @ weighted)


def project_all(
    func: PointFunction,
    basis: HHarmonicBasis,
    r: ArrayLike,
    rule: Optional[SphereRule] = None,
) -> Dict[Tuple[int, int], NDArray[np.float64]]:
    """f_{m,j}(r) for every basis member, from one set of samples."""
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    rule = rule or basis.sphere_rule()
    samples = _sphere_samples(func, rule, rs)
    return {
        (m, j): samples @ (rule.weights * y.evaluate(rule.points))
        for m, j, y in basis.items()
    }


def sphere_parseval(
    func: PointFunction,
    basis: HHarmonicBasis,
    r: ArrayLike,
    rule: Optional[SphereRule] = None,
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """(Σ_{m,j} |f_{m,j}(r)|², ∫|f(rω)|² h_κ² dσ) for each r."""
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    rule = rule or basis.sphere_rule()
    projections = project_all(func, basis, rs, rule)
    total = rule.integrate(_sphere_samples(func, rule, rs).T ** 2)
    return np.sum([v**2 for v in projections.values()], axis=0), np.asarray(total)


def radial_laguerre_coeffs(
    func: PointFunction,
    basis: HHarmonicBasis,
    m: int,
    j: int,
    k_max: int,
    rule: Optional[SphereRule] = None,
    radial_size: Optional[int] = None,
) -> LaguerreCoeffs:
    """
    Coefficients of f̃_{m,j} in the Laguerre functions ψ_k^δ with δ = λ_κ + m.

    Exact for f in V: f̃_{m,j} is then a polynomial in r² times e^{−r²/2}.
    """
    delta = basis.group.lambda_kappa + m
    radial = radial_rule(delta, radial_size or k_max + 4)
    tilde = project_radial(func, basis, m, j, radial.nodes, rule).tilde
    table = psi_table(k_max, delta, radial.nodes)
    coeffs = [float(radial.integrate(tilde * table[k])) for k in range(k_max + 1)]
    return LaguerreCoeffs.from_array(delta, coeffs)


# Funk–Hecke


def funk_hecke_constant(lam: float) -> float:
    """π 2^λ Γ(λ+1/2)²/Γ(λ+1), the multiplier of J_{λ+m}(z)/z^λ."""
    return float(
        np.pi * 2.0**lam * np.exp(2.0 * special.gammaln(lam + 0.5) - special.gammaln(lam + 1.0))
    )


@dataclass(frozen=True)
class FunkHeckeRow:
    m: int
    z: float
    lam: float
    integral: float
    bessel: float
    ratio: float
    closed_form: float


def funk_hecke_bessel(group: ReflectionGroupZ2d, m: int, z: float, n: int = 48) -> FunkHeckeRow:
    """
    Both sides of the Bessel form of the Funk–Hecke formula with λ = λ_κ.

    Left: B(λ+1/2, 1/2)/C_m^λ(1) ∫_{−1}^{1} e^{itz} C_m^λ(t)(1−t²)^{λ−1/2} dt by Gauss–Jacobi,
    with the phase i^m removed. Right: J_{λ+m}(z)/z^λ. Their ratio should not depend on z or m.
    """
    if not 0 <= m <= 10:
        raise DomainError(f"Funk-Hecke degree must be in [0, 10], got {m}")
    if not 0.1 <= z <= 20.0:
        raise DomainError(f"Funk-Hecke argument must be in [0.1, 20], got {z}")
    lam = group.lambda_kappa
    t, w = gauss_jacobi(lam - 0.5, lam - 0.5, n)
    weight = np.exp(special.betaln(lam + 0.5, 0.5)) / gegenbauer_at_one(m, lam)
    integrand = np.cos(z * t - 0.5 * np.pi * m) * np.asarray(gegenbauer_poly(m, lam, t))
    integral = float(weight * np.sum(w * integrand))
    bessel = float(special.jv(lam + m, z) / z**lam)
    return FunkHeckeRow(m, z, lam, integral, bessel, integral / bessel, funk_hecke_constant(lam))


@dataclass(frozen=True)
class FunkHeckeKernelRow:
    m: int
    j: int
    s: float
    integral: float
    bessel: float
    ratio: float
    closed_form: float


def funk_hecke_kernel(
    basis: HHarmonicBasis,
    m: int,
    j: int,
    x: ArrayLike,
    s: float,
    rule: Optional[SphereRule] = None,
) -> FunkHeckeKernelRow:
    """
    ∫ E_κ(x, s y') Y_{m,j}(y') h_κ²(y') dσ(y') against 𝓘_{λ+m}(|x|s)/(|x|s)^λ · Y_{m,j}(x').

    The proportionality constant is expected to be |S|_κ 2^λ Γ(λ+1), where |S|_κ is the mass
    of h_κ² dσ.
    """
    group = basis.group
    rule = rule or basis.sphere_rule()
    xs = np.asarray(x, dtype=float)
    rad = float(np.linalg.norm(xs))
    if rad <= 0.0 or s <= 0.0:
        raise DomainError("Funk-Hecke kernel check needs x != 0 and s > 0")
    y = basis.member(m, j)
    kernel = np.asarray(dunkl_kernel(group, xs[None, :], s * rule.points))
    integral = float(rule.integrate(kernel * y.evaluate(rule.points)))

    lam = group.lambda_kappa
    u = rad * s
    bessel = float(bessel_i_ratio(lam + m, u)) * u**m * float(y.evaluate(xs / rad))
    mass = sphere_moment(group.kappa, (0,) * group.d)
    closed = mass * 2.0**lam * float(np.exp(special.gammaln(lam + 1.0)))
    return FunkHeckeKernelRow(m, j, s, integral, bessel, integral / bessel, closed)


# Oscillator semigroup against Laguerre semigroups


def laguerre_semigroup_values(
    delta: float, t: float, g: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    r: ArrayLike, n: int = 64,
) -> NDArray[np.float64]:
    """
    T_t^δ g(r) = ∫ K_t^δ(r, s) g(s) s^{2δ+1} ds with the closed-form kernel.

    The radial rule is rescaled to the Gaussian decay e^{−(1+coth 2t)s²/2} of the integrand
    for g of the form q(s²)e^{−s²/2}.
    """
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    scale = 0.5 * (1.0 + 1.0 / np.tanh(2.0 * t))
    rule = radial_rule(delta, n).scaled(scale)
    samples = np.asarray(g(rule.nodes), dtype=float)
    log_terms = log_heat_kernel(delta, t, rs[:, None], rule.nodes[None, :])
    log_terms = log_terms + rule.log_weights[None, :]
    return np.sum(np.exp(log_terms) * samples[None, :], axis=1)


@dataclass(frozen=True)
class ProportionalityCheck:
    """lhs ≈ c·rhs on a grid; c is fitted by least squares over the usable points."""

    r: NDArray[np.float64]
    lhs: NDArray[np.float64]
    rhs: NDArray[np.float64]
    constant: float
    spread: float
    deviation: float
    usable: int = 0

    @property
    def resolved(self) -> bool:
        """False when every point of the profile sits below the noise floor."""
        return self.usable > 0


def fit_constant(
    r: NDArray[np.float64],
    lhs: NDArray[np.float64],
    rhs: NDArray[np.float64],
    floor: ArrayLike = 0.0,
) -> ProportionalityCheck:
    """
    Least-squares constant, the largest pointwise ratio deviation and max |lhs − c·rhs|.

    Points with |rhs| ≤ max(1e-8·max|rhs|, floor) carry no ratio information and are left out of
    the fit; floor may be given per point. With none left the constant is NaN.
    """
    scale = float(np.max(np.abs(rhs))) if len(rhs) else 0.0
    usable = np.abs(rhs) > np.maximum(np.asarray(floor, dtype=float), max(1e-8 * scale, 1e-300))
    count = int(np.count_nonzero(usable))
    if count == 0:
        deviation = float(np.max(np.abs(lhs), initial=0.0))
        return ProportionalityCheck(r, lhs, rhs, math.nan, 0.0, deviation, 0)
    lu, ru = lhs[usable], rhs[usable]
    c = float(np.dot(lu, ru)) / float(np.dot(ru, ru))
    spread = float(np.max(np.abs(lu / ru - c)))
    deviation = float(np.max(np.abs(lhs - c * rhs)))
    return ProportionalityCheck(r, lhs, rhs, c, spread, deviation, count)


def verify_prop21(
    group: ReflectionGroupZ2d,
    basis: HHarmonicBasis,
    f: SpectralCoeffs,
    t: float,
    m: int,
    j: int,
    r_grid: Sequence[float],
    rule: Optional[SphereRule] = None,
) -> ProportionalityCheck:
    """
    Spherical projection of e^{−tH}f against r^m T_t^{λ_κ+m} f̃_{m,j}(r).

    The left side is synthesized from coefficient-space heat flow; the right side applies the
    closed-form Laguerre kernel to the projected profile. The constant is expected to be 1.
    Radii where the profile is below PROFILE_NOISE_FLOOR times the largest sample of e^{−tH}f
    on that sphere are left out of the fit.
    """
    if t < 0.3:
        raise DomainError(f"Semigroup comparison needs t >= 0.3, got {t}")
    if f.group != group:
        raise DomainError("Coefficients belong to a different group")
    rule = rule or basis.sphere_rule()
    r = np.atleast_1d(np.asarray(r_grid, dtype=float))
    if np.any(r <= 0.0):
        raise DomainError("Radial projections need r > 0")
    heated = apply_heat(t, f)
    samples = _sphere_samples(lambda p: synthesize(heated, p), rule, r)
    lhs = samples @ (rule.weights * basis.member(m, j).evaluate(rule.points))

    def tilde(s: NDArray[np.float64]) -> NDArray[np.float64]:
        return project_radial(lambda p: synthesize(f, p), basis, m, j, s, rule).tilde

    rhs = r**m * laguerre_semigroup_values(group.lambda_kappa + m, t, tilde, r)
    floor = PROFILE_NOISE_FLOOR * np.max(np.abs(samples), axis=1)
    check = fit_constant(r, lhs, rhs, floor=floor)
    logger.debug(
        f"Heat/Laguerre check m={m} j={j} t={t}: constant {check.constant:.12f}, "
        f"spread {check.spread:.2e}, {check.usable}/{len(r)} points above the noise floor"
    )
    return check
