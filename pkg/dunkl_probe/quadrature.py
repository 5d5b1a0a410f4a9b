"""
Deterministic Gaussian quadrature rules.

Every Gaussian rule is built from the Jacobi matrix of its orthogonal polynomial
family: nodes are its eigenvalues (ascending), weights are Christoffel numbers
evaluated with a rescaled three-term recurrence so that tiny weights keep their
relative accuracy.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special
from scipy.linalg import eigh_tridiagonal

from dunkl_probe.errors import DomainError, SizeError

logger = logging.getLogger(__name__)

MAX_RADIAL_SIZE = 256
MAX_SPHERE_SIZE = 128
MAX_JACOBI_SIZE = 1024

_RESCALE_AT = 1e100


def weighted_sum(log_weights: NDArray[np.float64], values: ArrayLike) -> NDArray[np.float64]:
    """
    Σ_i w_i v_i with w_i = exp(log_weights[i]), evaluated term-wise in log space.

    values may carry trailing axes (vector-valued integrands); the sum runs over axis 0.
    """
    vals = np.asarray(values, dtype=float)
    lw = log_weights.reshape(log_weights.shape + (1,) * (vals.ndim - 1))
    with np.errstate(divide="ignore"):
        terms = np.sign(vals) * np.exp(lw + np.log(np.abs(vals)))
    return terms.sum(axis=0)


def _christoffel_log_weights(
    diag: NDArray[np.float64],
    off: NDArray[np.float64],
    log_mu0: float,
    nodes: NDArray[np.float64],
) -> NDArray[np.float64]:
    """ln of 1/Σ_k p_k(x)² with p_k the orthonormal polynomials of the recurrence."""
    n = len(diag)
    p_prev = np.zeros_like(nodes)
    p = np.ones_like(nodes)
    log_scale = np.full_like(nodes, -0.5 * log_mu0)
    total = p * p
    for k in range(n - 1):
        b_prev = off[k - 1] if k > 0 else 0.0
        p_prev, p = p, ((nodes - diag[k]) * p - b_prev * p_prev) / off[k]
        total = total + p * p
        big = np.maximum(np.abs(p), np.abs(p_prev))
        if np.any(big > _RESCALE_AT):
            s = np.where(big > _RESCALE_AT, big, 1.0)
            p, p_prev, total = p / s, p_prev / s, total / (s * s)
            log_scale = log_scale + np.log(s)
    return -(np.log(total) + 2.0 * log_scale)


def _golub_welsch(
    diag: NDArray[np.float64], off: NDArray[np.float64], log_mu0: float
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    if len(diag) == 1:
        return diag.copy(), np.array([log_mu0])
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    nodes = np.sort(nodes)
    return nodes, _christoffel_log_weights(diag, off, log_mu0, nodes)


# Jacobi


def _jacobi_recurrence(
    alpha: float, beta: float, n: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64], float]:
    ab = alpha + beta
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2.0)
    k = np.arange(1, n, dtype=float)
    diag[1:] = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2.0))

    off_sq = np.empty(max(n - 1, 0))
    if n > 1:
        off_sq[0] = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((ab + 2.0) ** 2 * (ab + 3.0))
        k = np.arange(2, n, dtype=float)
        off_sq[1:] = (
            4.0 * k * (k + alpha) * (k + beta) * (k + ab)
            / ((2 * k + ab) ** 2 * (2 * k + ab + 1.0) * (2 * k + ab - 1.0))
        )
    log_mu0 = (ab + 1.0) * np.log(2.0) + special.betaln(alpha + 1.0, beta + 1.0)
    return diag, np.sqrt(off_sq), float(log_mu0)


def gauss_jacobi(
    alpha: float, beta: float, n: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Gauss–Jacobi rule for the weight (1−t)^α (1+t)^β on [−1, 1].

    Args:
        alpha: Exponent at t = 1, α > −1
        beta: Exponent at t = −1, β > −1
        n: Number of nodes

    Returns:
        (nodes ascending, weights), exact for polynomials of degree ≤ 2n−1

    Raises:
        DomainError: If α or β ≤ −1
        SizeError: If n is out of range
    """
    if alpha <= -1.0 or beta <= -1.0:
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")
    if not 1 <= n <= MAX_JACOBI_SIZE:
        raise SizeError(f"Jacobi rule size must be in [1, {MAX_JACOBI_SIZE}], got {n}")
    nodes, log_w = _golub_welsch(*_jacobi_recurrence(alpha, beta, n))
    return nodes, np.exp(log_w)


def gauss_legendre(n: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Gauss–Legendre rule on [−1, 1]."""
    return gauss_jacobi(0.0, 0.0, n)


# Radial rules for dμ_δ(r) = r^{2δ+1} dr


def _laguerre_rule(alpha: float, n: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Generalized Gauss–Laguerre nodes and log weights for t^α e^{−t} on (0, ∞)."""
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    kk = np.arange(1, n, dtype=float)
    off = np.sqrt(kk * (kk + alpha))
    return _golub_welsch(diag, off, float(special.gammaln(alpha + 1.0)))


@dataclass(frozen=True, eq=False)
class RadialRule:
    """
    Gaussian rule for the measure dμ_δ(r) = r^{2δ+1} dr on (0, ∞).

    ``integrate(values)`` approximates ∫ F dμ_δ and is exact when
    F(r) = q(r²) e^{−r²} with deg q ≤ 2n−1. Weights are stored as logarithms.
    """

    delta: float
    nodes: NDArray[np.float64]
    log_weights: NDArray[np.float64]

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def weights(self) -> NDArray[np.float64]:
        return np.exp(self.log_weights)

    def integrate(self, values: ArrayLike) -> NDArray[np.float64]:
        """Σ_i w_i F(r_i) for F sampled at the nodes."""
        return weighted_sum(self.log_weights, values)

    def scaled(self, a: float) -> "RadialRule":
        """Rule exact for q(r²) e^{−a r²} instead of q(r²) e^{−r²}."""
        if a <= 0.0:
            raise DomainError(f"Scale must be positive, got {a}")
        return RadialRule(
            delta=self.delta,
            nodes=self.nodes / np.sqrt(a),
            log_weights=self.log_weights - (self.delta + 1.0) * np.log(a),
        )

    def to_rows(self) -> Iterator[Tuple[float, float]]:
        for r, w in zip(self.nodes, self.weights):
            yield float(r), float(w)


def radial_rule(delta: float, n: int) -> RadialRule:
    """
    Gaussian rule for ∫₀^∞ F(r) r^{2δ+1} dr.

    Built from the generalized Gauss–Laguerre rule of parameter δ through t = r².

    Args:
        delta: Measure parameter, δ ≥ −1/2
        n: Rule size, 1 ≤ n ≤ 256

    Returns:
        RadialRule with ascending nodes

    Raises:
        DomainError: If δ < −1/2
        SizeError: If n is out of range
    """
    if delta < -0.5:
        raise DomainError(f"Radial rule requires delta >= -1/2, got {delta}")
    if not 1 <= n <= MAX_RADIAL_SIZE:
        raise SizeError(f"Radial rule size must be in [1, {MAX_RADIAL_SIZE}], got {n}")

    t, log_w = _laguerre_rule(delta, n)
    logger.debug(f"Built radial rule delta={delta} n={n}, largest node r={np.sqrt(t[-1]):.3f}")
    return RadialRule(delta=delta, nodes=np.sqrt(t), log_weights=log_w - np.log(2.0) + t)


# Product rule on R^d for h_κ²(x) dx


@dataclass(frozen=True, eq=False)
class ProductRule:
    """Tensor rule for ∫_{R^d} F(x) Π_j |x_j|^{2κ_j} dx, exact for F = q(x) e^{−|x|²}."""

    points: NDArray[np.float64]
    log_weights: NDArray[np.float64]

    def integrate(self, values: ArrayLike) -> NDArray[np.float64]:
        return weighted_sum(self.log_weights, values)


def line_rule(kappa: float, n: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Symmetric rule on R for |x|^{2κ} dx with 2n nodes (log weights returned).

    Exact for q(x) e^{−x²} with deg q ≤ 4n−1.
    """
    half = radial_rule(kappa - 0.5, n)
    nodes = np.concatenate([-half.nodes[::-1], half.nodes])
    log_w = np.concatenate([half.log_weights[::-1], half.log_weights])
    return nodes, log_w


def product_rule(kappa: Sequence[float], n: int) -> ProductRule:
    """Tensor product of line rules, one per coordinate."""
    lines = [line_rule(k, n) for k in kappa]
    grids = np.meshgrid(*[nodes for nodes, _ in lines], indexing="ij")
    log_grids = np.meshgrid(*[lw for _, lw in lines], indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    log_w = np.sum([g.ravel() for g in log_grids], axis=0)
    return ProductRule(points=points, log_weights=log_w)


# Sphere rules for h_κ²(ω) dσ(ω)


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Rule on S^{d−1} for h_κ²(ω) dσ(ω); weights include the h_κ² factor."""

    d: int
    kappa: Tuple[float, ...]
    points: NDArray[np.float64]
    weights: NDArray[np.float64]
    exactness: int

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values: ArrayLike) -> NDArray[np.float64]:
        vals = np.asarray(values, dtype=float)
        return np.tensordot(self.weights, vals, axes=(0, 0))

    def to_rows(self) -> Iterator[Tuple[float, ...]]:
        for omega, w in zip(self.points, self.weights):
            yield tuple(float(c) for c in omega) + (float(w),)


def _simplex_rule(
    exponents: Sequence[float], n: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Collapsed-coordinate rule on the simplex Σu_j = 1 for the weight Π u_j^{a_j}.

    u_1 = x, (u_2, ...) = (1−x)·v with v on the smaller simplex.
    """
    d = len(exponents)
    if d == 1:
        return np.ones((1, 1)), np.ones(1)

    a_first = exponents[0]
    b = float(sum(exponents[1:])) + (d - 2)
    t, w = gauss_jacobi(b, a_first, n)
    x = 0.5 * (1.0 + t)
    w = w * 2.0 ** (-a_first - b - 1.0)

    rest_u, rest_w = _simplex_rule(exponents[1:], n)
    m = len(rest_w)
    u = np.empty((len(x) * m, d))
    u[:, 0] = np.repeat(x, m)
    u[:, 1:] = np.repeat(1.0 - x, m)[:, None] * np.tile(rest_u, (len(x), 1))
    return u, np.repeat(w, m) * np.tile(rest_w, len(x))


def sphere_rule(d: int, kappa: Sequence[float], n: int) -> SphereRule:
    """
    Rule on the weighted sphere (S^{d−1}, h_κ² dσ) for the group ℤ₂^d.

    The positive orthant is mapped to the simplex by u_j = ω_j², where the weight
    becomes a Dirichlet density integrated by nested Gauss–Jacobi rules; the orthant
    rule is then reflected into all 2^d orthants, which integrates every monomial
    that is odd in some coordinate to zero exactly.

    Args:
        d: Dimension, d ≥ 2
        kappa: Multiplicities κ_j ≥ 0
        n: Nodes per angular coordinate, n ≤ 128

    Returns:
        SphereRule exact for polynomials of degree ≤ 4n−1
    """
    if d < 2:
        raise DomainError(f"Sphere rule requires d >= 2, got {d}")
    if len(kappa) != d:
        raise DomainError(f"Expected {d} multiplicities, got {len(kappa)}")
    if any(k < 0 for k in kappa):
        raise DomainError(f"Multiplicities must be nonnegative, got {tuple(kappa)}")
    if not 1 <= n <= MAX_SPHERE_SIZE:
        raise SizeError(f"Sphere rule size must be in [1, {MAX_SPHERE_SIZE}], got {n}")

    u, w = _simplex_rule([k - 0.5 for k in kappa], n)
    omega = np.sqrt(u)
    w = w * 2.0 ** (-(d - 1))

    signs = np.array(list(itertools.product((1.0, -1.0), repeat=d)))
    points = (signs[:, None, :] * omega[None, :, :]).reshape(-1, d)
    weights = np.tile(w, len(signs))
    return SphereRule(
        d=d,
        kappa=tuple(float(k) for k in kappa),
        points=points,
        weights=weights,
        exactness=4 * n - 1,
    )


def sphere_moment(kappa: Sequence[float], beta: Sequence[int]) -> float:
    """Closed form of ∫_{S^{d−1}} ω^β h_κ²(ω) dσ(ω)."""
    if any(b % 2 for b in beta):
        return 0.0
    half = np.array([(b + 2.0 * k + 1.0) / 2.0 for b, k in zip(beta, kappa)])
    return float(2.0 * np.exp(np.sum(special.gammaln(half)) - special.gammaln(half.sum())))


# Composite panels for non-polynomial radial integrands


def power_panel_rule(
    c: float, r_max: float, panel_width: float, q: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Composite rule for ∫₀^{r_max} G(r) r^c dr with the r^c factor in the weights.

    The first panel uses Gauss–Jacobi with the endpoint singularity r^c built in;
    the remaining panels are Gauss–Legendre.
    """
    if c <= -1.0:
        raise DomainError(f"Power r^{c} is not integrable at 0")
    panels = max(1, int(np.ceil(r_max / panel_width)))
    h = r_max / panels

    t, w = gauss_jacobi(0.0, c, q)
    nodes: List[NDArray[np.float64]] = [0.5 * h * (1.0 + t)]
    weights: List[NDArray[np.float64]] = [w * (0.5 * h) ** (c + 1.0)]

    tl, wl = gauss_legendre(q)
    for i in range(1, panels):
        r = i * h + 0.5 * h * (1.0 + tl)
        nodes.append(r)
        weights.append(0.5 * h * wl * r**c)
    return np.concatenate(nodes), np.concatenate(weights)
