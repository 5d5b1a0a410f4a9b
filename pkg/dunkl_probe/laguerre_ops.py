"""
Laguerre functions ψ_k^δ on (ℝ⁺, r^{2δ+1}dr), the operator
L_δ = −d²/dr² + r² − (2δ+1)/r d/dr and its semigroup, L_δ^{−1/2}, the Laguerre Riesz
transform R^δ = (∂_r + r)L_δ^{−1/2}, and the modified semigroup with the (rs)^m factor.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, special

from dunkl_probe.dunkl_core import MultiPoly, parse_rational
from dunkl_probe.errors import DomainError, RangeError
from dunkl_probe.quadrature import RadialRule, power_panel_rule, radial_rule
from dunkl_probe.specfun import (
    FloatOrArray,
    laguerre_coefficients,
    laguerre_table,
    log_bessel_i_ratio,
)

logger = logging.getLogger(__name__)

RadialFunction = Callable[[ArrayLike], NDArray[np.float64]]

_EXP_LIMIT = 700.0


def _check_delta(delta: float) -> None:
    if delta < -0.5:
        raise DomainError(f"Laguerre parameter must satisfy delta >= -1/2, got {delta}")


@dataclass(frozen=True)
class LaguerreSystem:
    """ψ_k^δ with L_δ ψ_k^δ = (4k + 2δ + 2) ψ_k^δ."""

    delta: float

    def __post_init__(self) -> None:
        _check_delta(self.delta)

    def eigenvalue(self, k: int) -> float:
        return 4.0 * k + 2.0 * self.delta + 2.0

    def psi(self, k: int, r: ArrayLike) -> NDArray[np.float64]:
        return psi_table(k, self.delta, r)[k]


def _log_psi_norm(k: int, delta: float) -> float:
    return 0.5 * float(np.log(2.0) + special.gammaln(k + 1.0) - special.gammaln(k + delta + 1.0))


def psi_table(k_max: int, delta: float, r: ArrayLike) -> NDArray[np.float64]:
    """ψ_0^δ, ..., ψ_{k_max}^δ at r; shape (k_max + 1,) + shape(r)."""
    _check_delta(delta)
    rs = np.asarray(r, dtype=float)
    t = rs * rs
    table = laguerre_table(k_max, delta, t) * np.exp(-0.5 * t)
    norms = np.exp([_log_psi_norm(k, delta) for k in range(k_max + 1)])
    return table * norms.reshape((-1,) + (1,) * rs.ndim)


def psi(k: int, delta: float, r: ArrayLike) -> FloatOrArray:
    """
    ψ_k^δ(r) = (2 k!/Γ(k+δ+1))^{1/2} L_k^δ(r²) e^{−r²/2}.

    Orthonormal in L²(ℝ⁺, r^{2δ+1}dr).
    """
    values = psi_table(k, delta, r)[k]
    return float(values) if np.ndim(r) == 0 else values


@dataclass(frozen=True)
class LaguerreCoeffs:
    """Finite expansion Σ_k c_k ψ_k^δ."""

    delta: float
    entries: Mapping[int, float]
    k_max: int

    def __post_init__(self) -> None:
        _check_delta(self.delta)
        if any(k < 0 or k > self.k_max for k in self.entries):
            raise DomainError(f"Laguerre levels must lie in [0, {self.k_max}]")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    @classmethod
    def from_array(cls, delta: float, values: Sequence[float]) -> "LaguerreCoeffs":
        return cls(delta, {k: float(c) for k, c in enumerate(values)}, max(len(values) - 1, 0))

    def items(self) -> Iterator[Tuple[int, float]]:
        return iter(sorted(self.entries.items()))

    def as_array(self) -> NDArray[np.float64]:
        out = np.zeros(self.k_max + 1)
        for k, c in self.entries.items():
            out[k] = c
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def evaluate(self, r: ArrayLike) -> NDArray[np.float64]:
        table = psi_table(self.k_max, self.delta, r)
        return np.tensordot(self.as_array(), table, axes=(0, 0))


def _multiplier(f: LaguerreCoeffs, func: Callable[[int], float]) -> LaguerreCoeffs:
    return LaguerreCoeffs(f.delta, {k: func(k) * c for k, c in f.items()}, f.k_max)


def heat_semigroup(t: float, f: LaguerreCoeffs) -> LaguerreCoeffs:
    """T_t^δ = e^{−tL_δ} in coefficients."""
    if t < 0.0:
        raise DomainError(f"Heat time must be nonnegative, got {t}")
    system = LaguerreSystem(f.delta)
    return _multiplier(f, lambda k: float(np.exp(-system.eigenvalue(k) * t)))


def l_inv_sqrt(f: LaguerreCoeffs) -> LaguerreCoeffs:
    """L_δ^{−1/2}: multiply by (4k+2δ+2)^{−1/2}."""
    system = LaguerreSystem(f.delta)
    return _multiplier(f, lambda k: system.eigenvalue(k) ** -0.5)


def l_inv_sqrt_time_integral(f: LaguerreCoeffs) -> LaguerreCoeffs:
    """
    L_δ^{−1/2} from (1/√π)∫₀^∞ e^{−tL_δ} t^{−1/2} dt, integrated numerically per level.

    The substitution t = u² removes the endpoint singularity.
    """
    system = LaguerreSystem(f.delta)

    def factor(k: int) -> float:
        lam = system.eigenvalue(k)
        value, _ = integrate.quad(lambda u: np.exp(-lam * u * u), 0.0, np.inf, epsabs=1e-14)
        return 2.0 * value / np.sqrt(np.pi)

    return _multiplier(f, factor)


def ladder_values(f: LaguerreCoeffs, r: ArrayLike) -> NDArray[np.float64]:
    """
    (∂_r + r) Σ_k c_k ψ_k^δ at r.

    ∂_r is exact: d/dr L_k^δ(r²) = −2r L_{k−1}^{δ+1}(r²).
    """
    rs = np.asarray(r, dtype=float)
    t = rs * rs
    gauss = np.exp(-0.5 * t)
    base = laguerre_table(f.k_max, f.delta, t)
    shifted = laguerre_table(max(f.k_max - 1, 0), f.delta + 1.0, t)
    out = np.zeros_like(rs)
    for k, c in f.items():
        norm = np.exp(_log_psi_norm(k, f.delta))
        lag_deriv = -2.0 * rs * shifted[k - 1] if k > 0 else np.zeros_like(rs)
        derivative = norm * (lag_deriv - rs * base[k]) * gauss
        out = out + c * (derivative + rs * norm * base[k] * gauss)
    return out


def radial_derivative(f: LaguerreCoeffs, r: ArrayLike) -> NDArray[np.float64]:
    """∂_r Σ_k c_k ψ_k^δ."""
    rs = np.asarray(r, dtype=float)
    return ladder_values(f, rs) - rs * f.evaluate(rs)


def riesz_laguerre(f: LaguerreCoeffs) -> RadialFunction:
    """R^δ f = (∂_r + r) L_δ^{−1/2} f as a function of r."""
    g = l_inv_sqrt(f)
    return lambda r: ladder_values(g, r)


def riesz_laguerre_norm_sq(f: LaguerreCoeffs) -> float:
    """‖R^δ f‖² = Σ_k 4k/(4k+2δ+2) c_k², from (∂_r + r)ψ_k^δ = −2√k r ψ_{k−1}^{δ+1}."""
    system = LaguerreSystem(f.delta)
    return float(sum(4.0 * k / system.eigenvalue(k) * c * c for k, c in f.items()))


# Kernels


def log_heat_kernel(delta: float, t: float, r: ArrayLike, s: ArrayLike) -> NDArray[np.float64]:
    """
    ln K_t^δ(r, s) of the closed form.

    (rs)^{−δ} I_δ(rs/sinh 2t) is rewritten as (sinh 2t)^{−δ} I_δ(z)/z^δ, which stays finite
    at r = 0 or s = 0.
    """
    _check_delta(delta)
    if t <= 0.0:
        raise DomainError(f"Heat time must be positive, got {t}")
    rs = np.asarray(r, dtype=float)
    ss = np.asarray(s, dtype=float)
    sh = np.sinh(2.0 * t)
    z = rs * ss / sh
    return (
        -(1.0 + delta) * np.log(sh)
        - 0.5 / np.tanh(2.0 * t) * (rs * rs + ss * ss)
        + np.asarray(log_bessel_i_ratio(delta, z))
    )


def heat_kernel_closed(delta: float, t: float, r: ArrayLike, s: ArrayLike) -> FloatOrArray:
    """
    K_t^δ(r, s) = (sinh 2t)^{−1} e^{−½ coth(2t)(r²+s²)} (rs)^{−δ} I_δ(rs/sinh 2t).

    Raises:
        RangeError: If the value overflows
    """
    logs = log_heat_kernel(delta, t, r, s)
    if np.any(logs > _EXP_LIMIT):
        raise RangeError("Laguerre heat kernel overflows; use log_heat_kernel")
    out = np.exp(logs)
    return float(out) if np.ndim(out) == 0 else out


class SpectralSum(NamedTuple):
    value: float
    tail_bound: float


def heat_kernel_spectral(
    delta: float, t: float, r: float, s: float, terms: int
) -> SpectralSum:
    """
    Σ_{k<K} e^{−(4k+2δ+2)t} ψ_k^δ(r) ψ_k^δ(s), with a geometric estimate of the tail.

    The tail estimate is the last term times e^{−4t}/(1 − e^{−4t}).
    """
    if terms < 1:
        raise DomainError(f"Spectral truncation must be at least 1, got {terms}")
    system = LaguerreSystem(delta)
    pr = psi_table(terms - 1, delta, r)
    ps = psi_table(terms - 1, delta, s)
    decay = np.exp(-np.array([system.eigenvalue(k) for k in range(terms)]) * t)
    products = decay * pr * ps
    q = np.exp(-4.0 * t)
    return SpectralSum(float(np.sum(products)), float(abs(products[-1]) * q / (1.0 - q)))


class KernelRow(NamedTuple):
    delta: float
    t: float
    r: float
    s: float
    closed: float
    spectral: float
    rel_err: float


def compare_kernels(
    delta: float, t_grid: Sequence[float], r_grid: Sequence[float], terms: int
) -> List[KernelRow]:
    """Closed form against the spectral sum on the grid t × r × s (s over the r-grid)."""
    rows = []
    for t in t_grid:
        for r in r_grid:
            for s in r_grid:
                closed = float(heat_kernel_closed(delta, t, r, s))
                spectral = heat_kernel_spectral(delta, t, r, s, terms).value
                rel = abs(closed - spectral) / max(abs(closed), 1e-300)
                rows.append(KernelRow(delta, t, r, s, closed, spectral, rel))
    return rows


# Modified semigroup


def modified_semigroup(
    m: int, delta: float, t: float, h: ArrayLike, rule: RadialRule
) -> NDArray[np.float64]:
    """
    T̃_t h(r) = ∫₀^∞ (rs)^m K_t^{δ+m}(r, s) h(s) s^{2δ+1} ds on the nodes of a dμ_δ rule.

    h holds samples at rule.nodes; the output is on the same nodes. Equals
    r^m T_t^{δ+m}[s^{−m} h], so it is a semigroup in t.
    """
    if m < 0:
        raise DomainError(f"Degree must be nonnegative, got {m}")
    if abs(rule.delta - delta) > 1e-14:
        raise DomainError(f"Rule was built for delta={rule.delta}, expected {delta}")
    values = np.asarray(h, dtype=float)
    if values.shape != rule.nodes.shape:
        raise DomainError("Samples must match the rule nodes")

    r = rule.nodes[:, None]
    s = rule.nodes[None, :]
    with np.errstate(divide="ignore"):
        log_kernel = log_heat_kernel(delta + m, t, r, s) + m * (np.log(r) + np.log(s))
    log_terms = log_kernel + rule.log_weights[None, :]
    return np.sum(np.exp(log_terms) * values[None, :], axis=1)


# Measured ladder relation and exact residuals


def measure_laguerre_ladder(
    delta: float, k_max: int, rule_size: Optional[int] = None
) -> NDArray[np.float64]:
    """
    Matrix M[k, j] = ⟨(∂_r + r)ψ_k^δ, r ψ_j^{δ+1}⟩_{dμ_δ} for k, j ≤ k_max.

    Expected: −2√k on the subdiagonal j = k − 1 and zero elsewhere.
    """
    rule = radial_rule(delta, rule_size or k_max + 4)
    r = rule.nodes
    rows = []
    for k in range(k_max + 1):
        single = LaguerreCoeffs(delta, {k: 1.0}, k)
        rows.append(ladder_values(single, r))
    lowered = np.array(rows)
    targets = r * psi_table(k_max, delta + 1.0, r)
    return np.array(
        [[float(rule.integrate(lowered[k] * targets[j])) for j in range(k_max + 1)]
         for k in range(k_max + 1)]
    )


def laguerre_operator_residual(k: int, delta: Fraction) -> MultiPoly:
    """
    Polynomial R with (L_δ − (4k+2δ+2))(Q e^{−r²/2}) = R e^{−r²/2}, Q(r) = L_k^δ(r²).

    L_δ(Q e^{−r²/2}) = [−Q'' + 2rQ' + (2δ+2)Q − (2δ+1)Q'/r] e^{−r²/2}; zero exactly.
    """
    dl = parse_rational(delta)
    q = MultiPoly(1, {(2 * i,): c for i, c in enumerate(laguerre_coefficients(k, dl))})
    q1 = q.derivative(0)
    q2 = q1.derivative(0)
    lhs = -q2 + q1.times_variable(0) * 2 + q * (2 * dl + 2)
    lhs = lhs - q1.divide_by_variable(0) * (2 * dl + 1)
    return lhs - q * (4 * k + 2 * dl + 2)


# Vector-valued building blocks


@dataclass(frozen=True)
class VectorRatioProbe:
    kind: str
    delta: float
    p: float
    a: float
    ratios: Tuple[float, ...]

    @property
    def sup_ratio(self) -> float:
        return max(self.ratios) if self.ratios else 0.0


def _radial_lp(
    values: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    p: float,
    exponent: float,
    r_max: float,
) -> float:
    nodes, weights = power_panel_rule(exponent, r_max, 0.25, 20)
    return float(np.sum(weights * values(nodes) ** (p / 2.0)))


def vector_ratio_probe(
    kind: str,
    delta: float,
    p: float,
    a: float,
    trials: int,
    seed: int,
    m_max: int = 6,
    levels: int = 8,
) -> VectorRatioProbe:
    """
    Empirical ratio of the vector-valued Laguerre inequalities on random sequences (f_m).

    kind="riesz": (Σ_m r^{2m}|R^{δ+m} f_m|²)^{1/2} against (Σ_m r^{2m}|f_m|²)^{1/2};
    kind="inverse_sqrt": (Σ_m m² r^{2m−2}|L_{δ+m}^{−1/2} f_m|²)^{1/2} instead on the left.
    Both sides are measured in L^p(r^a dμ_δ); the ratio of the p-th roots is recorded.
    """
    if kind not in ("riesz", "inverse_sqrt"):
        raise DomainError(f"Unknown probe kind {kind!r}")
    if not 1.0 < p < np.inf:
        raise DomainError(f"p must satisfy 1 < p < inf, got {p}")
    rng = np.random.default_rng(seed)
    r_max = float(np.sqrt(4.0 * levels + 2.0 * (delta + m_max) + 2.0)) + 10.0
    exponent = a + 2.0 * delta + 1.0

    ratios = []
    for _ in range(trials):
        seq = [
            LaguerreCoeffs.from_array(delta + m, rng.standard_normal(levels))
            for m in range(m_max + 1)
        ]

        def right(r: NDArray[np.float64], seq: List[LaguerreCoeffs] = seq) -> NDArray[np.float64]:
            return sum(r ** (2 * m) * f.evaluate(r) ** 2 for m, f in enumerate(seq))

        def left(r: NDArray[np.float64], seq: List[LaguerreCoeffs] = seq) -> NDArray[np.float64]:
            total = np.zeros_like(r)
            for m, f in enumerate(seq):
                if kind == "riesz":
                    total = total + r ** (2 * m) * riesz_laguerre(f)(r) ** 2
                elif m > 0:
                    total = total + m * m * r ** (2 * m - 2) * l_inv_sqrt(f).evaluate(r) ** 2
            return total

        num = _radial_lp(left, p, exponent, r_max)
        den = _radial_lp(right, p, exponent, r_max)
        ratios.append((num / den) ** (1.0 / p))
    logger.debug(f"Vector {kind} probe delta={delta} p={p} a={a}: sup {max(ratios):.6f}")
    return VectorRatioProbe(kind, delta, p, a, tuple(ratios))
