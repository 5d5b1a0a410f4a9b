"""
Generalized Hermite functions for ℤ₂^d and the coefficient-space oscillator calculus.

Φ_α(x) = Π_j φ_{α_j}(x_j) is the tensor-product basis of L²(h_κ² dx); every operator
below (heat semigroup, H^{−1/2}, ladders A_j = T_j + x_j and A_j* = −T_j + x_j, Riesz
transforms) acts exactly on finite coefficient maps.
"""

import functools
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from dunkl_probe.dunkl_core import (
    MultiPoly,
    ReflectionGroupZ2d,
    dunkl_laplacian,
    dunkl_op,
    log_dunkl_kernel,
)
from dunkl_probe.errors import DomainError
from dunkl_probe.quadrature import ProductRule, line_rule, product_rule
from dunkl_probe.specfun import laguerre_coefficients, laguerre_table

logger = logging.getLogger(__name__)

# Levels used when calibrating the Mehler constant at t = 1.
_CALIBRATION_LEVELS = 60


@dataclass(frozen=True, order=True)
class HermiteIndex:
    """Multi-index α ∈ ℕ^d of Φ_α."""

    alpha: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a < 0 for a in self.alpha):
            raise DomainError(f"Hermite index must be nonnegative, got {self.alpha}")

    @property
    def degree(self) -> int:
        return sum(self.alpha)

    @property
    def is_even(self) -> bool:
        return all(a % 2 == 0 for a in self.alpha)

    def shifted(self, j: int, step: int) -> Optional["HermiteIndex"]:
        alpha = list(self.alpha)
        alpha[j] += step
        if alpha[j] < 0:
            return None
        return HermiteIndex(tuple(alpha))


def eigenvalue(group: ReflectionGroupZ2d, index: HermiteIndex) -> float:
    """2|α| + d + 2γ."""
    return 2.0 * index.degree + group.d + 2.0 * group.gamma


def indices_up_to(d: int, n_max: int, even_only: bool = False) -> List[HermiteIndex]:
    """All α with |α| ≤ n_max, in ascending order."""
    step = 2 if even_only else 1
    out = [
        HermiteIndex(alpha)
        for alpha in itertools.product(range(0, n_max + 1, step), repeat=d)
        if sum(alpha) <= n_max
    ]
    return sorted(out)


@dataclass(frozen=True)
class SpectralCoeffs:
    """
    Finite generalized Hermite expansion Σ_α c_α Φ_α, an element of V.

    The G-invariant subspace V_G is exactly the span of all-even indices.
    """

    group: ReflectionGroupZ2d
    entries: Mapping[HermiteIndex, float]
    n_max: int

    def __post_init__(self) -> None:
        for index in self.entries:
            if len(index.alpha) != self.group.d:
                raise DomainError(f"Index {index.alpha} does not match d={self.group.d}")
            if index.degree > self.n_max:
                raise DomainError(f"Index {index.alpha} exceeds truncation N={self.n_max}")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    @classmethod
    def basis(cls, group: ReflectionGroupZ2d, alpha: Sequence[int]) -> "SpectralCoeffs":
        index = HermiteIndex(tuple(alpha))
        return cls(group, {index: 1.0}, index.degree)

    @classmethod
    def zero(cls, group: ReflectionGroupZ2d, n_max: int = 0) -> "SpectralCoeffs":
        return cls(group, {}, n_max)

    def items(self) -> Iterator[Tuple[HermiteIndex, float]]:
        """Entries in ascending index order; every reduction uses this order."""
        return iter(sorted(self.entries.items()))

    def coefficient(self, alpha: Sequence[int]) -> float:
        return self.entries.get(HermiteIndex(tuple(alpha)), 0.0)

    def norm(self) -> float:
        return float(np.sqrt(sum(c * c for _, c in self.items())))

    def is_g_invariant(self) -> bool:
        return all(index.is_even for index, c in self.entries.items() if c != 0.0)

    def scaled(self, factor: float) -> "SpectralCoeffs":
        return SpectralCoeffs(
            self.group, {k: factor * c for k, c in self.entries.items()}, self.n_max
        )

    def __add__(self, other: "SpectralCoeffs") -> "SpectralCoeffs":
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, 0.0) + c
        return SpectralCoeffs(self.group, out, max(self.n_max, other.n_max))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.group.d,
            "kappa": self.group.kappa_labels,
            "N": self.n_max,
            "entries": [{"alpha": list(k.alpha), "c": float(c)} for k, c in self.items()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SpectralCoeffs":
        group = ReflectionGroupZ2d.from_kappa(data["kappa"])
        if group.d != data["d"]:
            raise DomainError(f"kappa has {group.d} entries but d={data['d']}")
        entries = {HermiteIndex(tuple(e["alpha"])): float(e["c"]) for e in data["entries"]}
        return cls(group, entries, int(data["N"]))


def inner(f: SpectralCoeffs, g: SpectralCoeffs) -> float:
    """⟨f, g⟩ in L²(h_κ² dx), from coefficients."""
    return float(sum(c * g.entries.get(k, 0.0) for k, c in f.items()))


# One-dimensional functions


def _log_norm_1d(k: int, kappa: float, odd: bool) -> float:
    shift = 1.5 if odd else 0.5
    return 0.5 * float(special.gammaln(k + 1.0) - special.gammaln(k + kappa + shift))


def phi_table(n_max: int, kappa: float, x: ArrayLike) -> NDArray[np.float64]:
    """
    φ_0, ..., φ_{n_max} at x for the weight |x|^{2κ}; shape (n_max + 1,) + shape(x).

    φ_{2k}(x) = (−1)^k c_k L_k^{κ−1/2}(x²) e^{−x²/2} and
    φ_{2k+1}(x) = (−1)^k c'_k x L_k^{κ+1/2}(x²) e^{−x²/2}; κ = 0 gives the
    classical Hermite functions with their usual signs.
    """
    if kappa < 0.0:
        raise DomainError(f"Multiplicity must be nonnegative, got {kappa}")
    if n_max < 0:
        raise DomainError(f"Level must be nonnegative, got {n_max}")
    xs = np.asarray(x, dtype=float)
    t = xs * xs
    gauss = np.exp(-0.5 * t)
    k_max = n_max // 2
    even = laguerre_table(k_max, kappa - 0.5, t)
    odd = laguerre_table(k_max, kappa + 0.5, t)

    table = np.empty((n_max + 1,) + xs.shape)
    for n in range(n_max + 1):
        k = n // 2
        sign = -1.0 if k % 2 else 1.0
        if n % 2 == 0:
            table[n] = sign * np.exp(_log_norm_1d(k, kappa, False)) * even[k] * gauss
        else:
            table[n] = sign * np.exp(_log_norm_1d(k, kappa, True)) * xs * odd[k] * gauss
    return table


def phi_1d(n: int, kappa: float, x: ArrayLike) -> Any:
    """Orthonormal one-dimensional generalized Hermite function φ_n in L²(|x|^{2κ}dx)."""
    values = phi_table(n, kappa, x)[n]
    return float(values) if np.ndim(x) == 0 else values


def phi_nd(index: HermiteIndex, group: ReflectionGroupZ2d, x: ArrayLike) -> Any:
    """Φ_α(x) = Π_j φ_{α_j}(x_j) for points of shape (..., d)."""
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1] != group.d:
        raise DomainError(f"Points must have last axis {group.d}")
    out = np.ones(pts.shape[:-1])
    for j, (a, k) in enumerate(zip(index.alpha, group.kappa)):
        out = out * phi_table(a, k, pts[..., j])[a]
    return float(out) if out.ndim == 0 else out


# Exact polynomial parts


def polynomial_part_1d(n: int, kappa: Fraction, d: int = 1, j: int = 0) -> MultiPoly:
    """p_n with φ_n = C_n p_n(x_j) e^{−x_j²/2}, as a polynomial in d variables."""
    k = n // 2
    parity = n % 2
    a = kappa - Fraction(1, 2) if parity == 0 else kappa + Fraction(1, 2)
    sign = -1 if k % 2 else 1
    terms = {}
    for i, c in enumerate(laguerre_coefficients(k, a)):
        exps = [0] * d
        exps[j] = 2 * i + parity
        terms[tuple(exps)] = sign * c
    return MultiPoly(d, terms)


def hermite_polynomial_part(index: HermiteIndex, group: ReflectionGroupZ2d) -> MultiPoly:
    """Exact P_α with Φ_α = C_α P_α(x) e^{−|x|²/2}."""
    poly = MultiPoly.constant(group.d, 1)
    for j, a in enumerate(index.alpha):
        poly = poly * polynomial_part_1d(a, group.kappa_exact[j], group.d, j)
    return poly


def hermite_norm_constant(index: HermiteIndex, group: ReflectionGroupZ2d) -> float:
    """C_α in Φ_α = C_α P_α e^{−|x|²/2}."""
    total = 0.0
    for a, kappa in zip(index.alpha, group.kappa):
        total += _log_norm_1d(a // 2, kappa, bool(a % 2))
    return float(np.exp(total))


def eigen_residual(index: HermiteIndex, group: ReflectionGroupZ2d) -> MultiPoly:
    """
    Polynomial R with (−Δ_κ + |x|² − λ_α)Φ_α = C_α R e^{−|x|²/2}; zero exactly.

    Uses (−Δ_κ + |x|²)(P e^{−|x|²/2}) = [−Δ_κP + Σ_j T_j(x_j P) + Σ_j x_j T_j P] e^{−|x|²/2}.
    """
    poly = hermite_polynomial_part(index, group)
    out = -dunkl_laplacian(group, poly)
    for j in range(group.d):
        out = out + dunkl_op(group, j, poly.times_variable(j))
        out = out + dunkl_op(group, j, poly).times_variable(j)
    lam = 2 * index.degree + group.d + 2 * group.gamma_exact
    return out - poly * lam


# Ladder coefficients


def bracket(n: int, kappa: float) -> float:
    """[n]_κ = n + 2κ for odd n, n for even n."""
    return n + 2.0 * kappa * (n % 2)


def _exact_values(poly: MultiPoly, nodes: NDArray[np.float64]) -> NDArray[np.float64]:
    """One-variable polynomial evaluated in exact rational arithmetic at float nodes."""
    terms = poly.terms
    out = []
    for x in nodes:
        xr = Fraction(float(x))
        out.append(float(sum(c * xr ** e[0] for e, c in terms.items())))
    return np.array(out)


@functools.lru_cache(maxsize=64)
def _measure_ladder_1d(kappa: Fraction, n_max: int) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    group = ReflectionGroupZ2d((kappa,))
    kf = float(kappa)
    nodes, log_w = line_rule(kf, n_max // 2 + 3)
    log_w = log_w - nodes**2

    polys = [polynomial_part_1d(n, kappa) for n in range(n_max + 2)]
    consts = [_log_norm_1d(n // 2, kf, bool(n % 2)) for n in range(n_max + 2)]
    values = [_exact_values(p, nodes) for p in polys]

    def pair(lowered: MultiPoly, n_from: int, n_to: int) -> float:
        f = _exact_values(lowered, nodes) * values[n_to]
        scale = np.exp(consts[n_from] + consts[n_to] + log_w)
        return float(np.sum(scale * f))

    x = MultiPoly.variable(1, 0)
    down = [0.0]
    for n in range(1, n_max + 2):
        down.append(pair(dunkl_op(group, 0, polys[n]), n, n - 1))
    up = []
    for n in range(n_max + 1):
        raised = -dunkl_op(group, 0, polys[n]) + polys[n] * x * 2
        up.append(pair(raised, n, n + 1))
    logger.debug(f"Measured ladder coefficients for kappa={kappa} up to level {n_max}")
    return tuple(down), tuple(up)


@dataclass(frozen=True)
class LadderTable:
    """
    Measured ladder coefficients per coordinate.

    A_j Φ_α = down[j][α_j] Φ_{α−e_j} and A_j* Φ_α = up[j][α_j] Φ_{α+e_j}.
    """

    kappa: Tuple[float, ...]
    n_max: int
    down: NDArray[np.float64] = field(repr=False)
    up: NDArray[np.float64] = field(repr=False)

    def closed_form_down(self, j: int, n: int) -> float:
        """Conjectured √(2[n]_κ)."""
        return float(np.sqrt(2.0 * bracket(n, self.kappa[j])))

    def closed_form_deviation(self) -> float:
        worst = 0.0
        for j in range(len(self.kappa)):
            for n in range(self.n_max + 2):
                worst = max(worst, abs(self.down[j][n] - self.closed_form_down(j, n)))
            for n in range(self.n_max + 1):
                worst = max(worst, abs(self.up[j][n] - self.closed_form_down(j, n + 1)))
        return worst

    def consistency_residual(self, index: HermiteIndex) -> float:
        """½Σ_j [d_j(α_j)u_j(α_j−1) + u_j(α_j)d_j(α_j+1)] − (2|α| + d + 2γ)."""
        total = 0.0
        for j, a in enumerate(index.alpha):
            lower = self.down[j][a] * self.up[j][a - 1] if a > 0 else 0.0
            total += 0.5 * (lower + self.up[j][a] * self.down[j][a + 1])
        expected = 2.0 * index.degree + len(self.kappa) + 2.0 * sum(self.kappa)
        return total - expected


def ladder_table(group: ReflectionGroupZ2d, n_max: int) -> LadderTable:
    """
    Ladder coefficients measured by quadrature for levels 0..n_max.

    d_j(n) = ⟨A_jΦ_n, Φ_{n−1}⟩ and u_j(n) = ⟨A_j*Φ_n, Φ_{n+1}⟩ with A_j applied symbolically
    to the polynomial part; the polynomial values are exact at the rule nodes.
    """
    if not 0 <= n_max <= 64:
        raise DomainError(f"Ladder levels must be in [0, 64], got {n_max}")
    downs, ups = [], []
    for k in group.kappa_exact:
        down, up = _measure_ladder_1d(k, n_max)
        downs.append(down)
        ups.append(up)
    return LadderTable(group.kappa, n_max, np.array(downs), np.array(ups))


def _table_for(f: SpectralCoeffs, extra: int = 1) -> LadderTable:
    return ladder_table(f.group, f.n_max + extra)


# Coefficient-space operators


def _multiplier(
    f: SpectralCoeffs, func: Callable[[HermiteIndex], float]
) -> SpectralCoeffs:
    return SpectralCoeffs(f.group, {k: func(k) * c for k, c in f.items()}, f.n_max)


def apply_heat(t: float, f: SpectralCoeffs) -> SpectralCoeffs:
    """e^{−tH}: multiply by e^{−(2|α|+d+2γ)t}."""
    if t <= 0.0:
        raise DomainError(f"Heat time must be positive, got {t}")
    return _multiplier(f, lambda k: float(np.exp(-eigenvalue(f.group, k) * t)))


def apply_h_inv_sqrt(f: SpectralCoeffs) -> SpectralCoeffs:
    """H^{−1/2}: multiply by (2|α|+d+2γ)^{−1/2}."""
    return _multiplier(f, lambda k: float(eigenvalue(f.group, k) ** -0.5))


def apply_h(f: SpectralCoeffs) -> SpectralCoeffs:
    return _multiplier(f, lambda k: eigenvalue(f.group, k))


def apply_ladder(
    j: int, f: SpectralCoeffs, raise_: bool, table: Optional[LadderTable] = None
) -> SpectralCoeffs:
    """A_j (raise_=False) or A_j* (raise_=True) in coefficient space."""
    table = table or _table_for(f)
    out: Dict[HermiteIndex, float] = {}
    for k, c in f.items():
        target = k.shifted(j, 1 if raise_ else -1)
        if target is None:
            continue
        coeff = table.up[j][k.alpha[j]] if raise_ else table.down[j][k.alpha[j]]
        out[target] = out.get(target, 0.0) + coeff * c
    return SpectralCoeffs(f.group, out, f.n_max + (1 if raise_ else 0))


def apply_riesz(j: int, f: SpectralCoeffs, table: Optional[LadderTable] = None) -> SpectralCoeffs:
    """R_j^κ = A_j H^{−1/2}."""
    return apply_ladder(j, apply_h_inv_sqrt(f), raise_=False, table=table)


def apply_riesz_star(
    j: int, f: SpectralCoeffs, table: Optional[LadderTable] = None
) -> SpectralCoeffs:
    """R_j^{κ*} = A_j* H^{−1/2}."""
    return apply_ladder(j, apply_h_inv_sqrt(f), raise_=True, table=table)


def g_symmetrize(f: SpectralCoeffs) -> SpectralCoeffs:
    """f^#: the average over the 2^d sign flips keeps only all-even indices."""
    return SpectralCoeffs(f.group, {k: c for k, c in f.items() if k.is_even}, f.n_max)


def riesz_adjoint_defect(j: int, f: SpectralCoeffs, g: SpectralCoeffs) -> float:
    """⟨R_j f, g⟩ − ⟨f, R_j* g⟩ from coefficients."""
    return inner(apply_riesz(j, f), g) - inner(f, apply_riesz_star(j, g))


@dataclass(frozen=True)
class FactorizationDefect:
    index: Tuple[int, ...]
    measured: float
    expected: float


def factorization_defect(group: ReflectionGroupZ2d, alpha: Sequence[int]) -> FactorizationDefect:
    """
    (H − d − Σ_j A_j*A_j) on Φ_α, against its predicted value 2Σ_j κ_j(−1)^{α_j}.

    For κ = 0 this is the factorization H = Σ_j A_j*A_j + d.
    """
    index = HermiteIndex(tuple(alpha))
    f = SpectralCoeffs(group, {index: 1.0}, index.degree)
    table = _table_for(f)
    total = 0.0
    for j in range(group.d):
        total += apply_ladder(j, apply_ladder(j, f, False, table), True, table).coefficient(alpha)
    measured = eigenvalue(group, index) - group.d - total
    expected = 2.0 * sum(k * (-1) ** a for k, a in zip(group.kappa, index.alpha))
    return FactorizationDefect(index.alpha, measured, expected)


# Synthesis and projection


def synthesize(f: SpectralCoeffs, points: ArrayLike) -> NDArray[np.float64]:
    """Σ_α c_α Φ_α at points of shape (M, d)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    group = f.group
    tables = [phi_table(f.n_max, group.kappa[j], pts[:, j]) for j in range(group.d)]
    out = np.zeros(len(pts))
    for k, c in f.items():
        term = np.full(len(pts), c)
        for j, a in enumerate(k.alpha):
            term = term * tables[j][a]
        out += term
    return out


def _rule_for(group: ReflectionGroupZ2d, n_max: int, rule: Optional[ProductRule]) -> ProductRule:
    return rule or product_rule(group.kappa, n_max // 2 + 4)


def project(
    func: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    index: HermiteIndex,
    group: ReflectionGroupZ2d,
    rule: Optional[ProductRule] = None,
) -> float:
    """Quadrature approximation of (f, Φ_α) = ∫ f Φ_α h_κ² dx."""
    rule = _rule_for(group, index.degree + 8, rule)
    values = func(rule.points) * phi_nd(index, group, rule.points)
    return float(rule.integrate(values))


def analyze(
    func: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    group: ReflectionGroupZ2d,
    n_max: int,
    rule: Optional[ProductRule] = None,
) -> SpectralCoeffs:
    """All coefficients (f, Φ_α) with |α| ≤ n_max on one product rule."""
    rule = _rule_for(group, n_max + 8, rule)
    samples = func(rule.points)
    tables = [phi_table(n_max, group.kappa[j], rule.points[:, j]) for j in range(group.d)]
    entries = {}
    for index in indices_up_to(group.d, n_max):
        basis = np.ones(len(rule.points))
        for j, a in enumerate(index.alpha):
            basis = basis * tables[j][a]
        entries[index] = float(rule.integrate(samples * basis))
    return SpectralCoeffs(group, entries, n_max)


def random_invariant_coeffs(
    group: ReflectionGroupZ2d, n_max: int, rng: np.random.Generator
) -> SpectralCoeffs:
    """Unit-norm f ∈ V_G with i.i.d. standard normal coefficients on all-even indices."""
    indices = indices_up_to(group.d, n_max, even_only=True)
    values = rng.standard_normal(len(indices))
    values = values / np.linalg.norm(values)
    return SpectralCoeffs(group, dict(zip(indices, values.tolist())), n_max)


# Mehler kernel


def _log_mehler_unnormalized(
    group: ReflectionGroupZ2d, t: float, x: NDArray[np.float64], y: NDArray[np.float64]
) -> NDArray[np.float64]:
    s = np.sinh(2.0 * t)
    power = -(group.d / 2.0 + group.gamma) * np.log(s)
    gauss = -0.5 / np.tanh(2.0 * t) * (np.sum(x * x, axis=-1) + np.sum(y * y, axis=-1))
    return power + gauss + np.asarray(log_dunkl_kernel(group, x / s, y))


def mehler_constant_closed(group: ReflectionGroupZ2d) -> float:
    """Π_j 2^{−κ_j−1/2}/Γ(κ_j+1/2)."""
    k = np.array(group.kappa)
    return float(np.exp(np.sum(-(k + 0.5) * np.log(2.0) - special.gammaln(k + 0.5))))


@functools.lru_cache(maxsize=64)
def _calibrated_constant(kappa_exact: Tuple[Fraction, ...]) -> float:
    group = ReflectionGroupZ2d(kappa_exact)
    origin = np.zeros(group.d)
    spectral = mehler_spectral(group, 1.0, origin, origin, _CALIBRATION_LEVELS)
    closed = float(np.exp(_log_mehler_unnormalized(group, 1.0, origin, origin)))
    logger.debug(f"Calibrated Mehler constant for kappa={group.kappa_labels}: {spectral / closed}")
    return spectral / closed


def mehler_constant(group: ReflectionGroupZ2d) -> float:
    """Normalization fixed by matching the spectral sum at (t, x, y) = (1, 0, 0)."""
    return _calibrated_constant(group.kappa_exact)


def mehler_kernel(
    group: ReflectionGroupZ2d,
    t: float,
    x: ArrayLike,
    y: ArrayLike,
    constant: Optional[float] = None,
) -> Any:
    """
    Heat kernel of H_{d,κ} in closed form.

    c (sinh 2t)^{−d/2−γ} exp(−½ coth(2t)(|x|²+|y|²)) E_κ(x/sinh 2t, y), evaluated in
    log space; c defaults to the calibrated constant.
    """
    if t <= 0.0:
        raise DomainError(f"Heat time must be positive, got {t}")
    c = mehler_constant(group) if constant is None else constant
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    out = c * np.exp(_log_mehler_unnormalized(group, t, xs, ys))
    return float(out) if np.ndim(out) == 0 else out


def mehler_spectral(
    group: ReflectionGroupZ2d, t: float, x: ArrayLike, y: ArrayLike, n_max: int
) -> Any:
    """Σ_α e^{−(2|α|+d+2γ)t} Φ_α(x)Φ_α(y) truncated at α_j ≤ n_max in each coordinate."""
    if t <= 0.0:
        raise DomainError(f"Heat time must be positive, got {t}")
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    out = np.ones(np.broadcast_shapes(xs.shape, ys.shape)[:-1])
    levels = np.arange(n_max + 1)
    for j, kappa in enumerate(group.kappa):
        px = phi_table(n_max, kappa, xs[..., j])
        py = phi_table(n_max, kappa, ys[..., j])
        decay = np.exp(-(2.0 * levels + 1.0 + 2.0 * kappa) * t)
        decay = decay.reshape((-1,) + (1,) * (px.ndim - 1))
        out = out * np.sum(decay * px * py, axis=0)
    return float(out) if np.ndim(out) == 0 else out
