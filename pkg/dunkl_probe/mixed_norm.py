"""
Weighted mixed norms L^{p,2}(w(r) r^{d+2γ−1} h_κ²(ω) dσ(ω) dr), Muckenhoupt A_p^δ checks for
power weights, and the probes built on them: the Riesz decomposition on spheres, the
Laguerre connection, the rotation-average identity and the empirical norm ratios of the
Riesz transforms.
"""

import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from dunkl_probe.dunkl_core import ReflectionGroupZ2d
from dunkl_probe.errors import AccuracyError, DomainError, PreconditionError
from dunkl_probe.hermite_engine import (
    LadderTable,
    SpectralCoeffs,
    apply_h_inv_sqrt,
    apply_ladder,
    apply_riesz,
    g_symmetrize,
    ladder_table,
    random_invariant_coeffs,
    synthesize,
)
from dunkl_probe.hharmonics import (
    HHarmonicBasis,
    ProportionalityCheck,
    fit_constant,
    project_radial,
    radial_laguerre_coeffs,
    verify_prop32,
)
from dunkl_probe.laguerre_ops import l_inv_sqrt, ladder_values, riesz_laguerre
from dunkl_probe.quadrature import (
    SphereRule,
    gauss_jacobi,
    gauss_legendre,
    power_panel_rule,
    sphere_rule,
)

logger = logging.getLogger(__name__)

PointFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]

# Radial integrands are cut where they drop below this fraction of their peak.
TAIL_FRACTION = 1e-16

LAMBDA_SOURCES = ("measured", "paper", "exact")


@dataclass(frozen=True)
class PowerWeight:
    """w(r) = r^a on (0, ∞)."""

    a: float = 0.0

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        return np.asarray(r, dtype=float) ** self.a


@dataclass(frozen=True)
class MixedNormParams:
    """Exponent, group, weight and the discretization of the L^{p,2} norm."""

    p: float
    group: ReflectionGroupZ2d
    weight: PowerWeight = PowerWeight()
    sphere_n: int = 24
    panel_width: float = 0.25
    panel_nodes: int = 16
    scan_step: float = 0.25
    scan_max: float = 40.0

    def __post_init__(self) -> None:
        if not 1.0 < self.p < math.inf:
            raise DomainError(f"p must satisfy 1 < p < inf, got {self.p}")
        if self.group.d < 2:
            raise DomainError("Mixed norms need d >= 2")

    @property
    def p_conjugate(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def delta(self) -> float:
        """δ = d/2 + γ − 1, the index of the A_p class."""
        return self.group.d / 2.0 + self.group.gamma - 1.0

    @property
    def radial_exponent(self) -> float:
        return self.weight.a + self.group.d + 2.0 * self.group.gamma - 1.0

    def sphere_rule(self) -> SphereRule:
        return _sphere_rule(self.group.d, self.group.kappa, self.sphere_n)

    def dual(self) -> "MixedNormParams":
        """Parameters of the dual space: p' and the weight w^{1−p'}."""
        p_dual = self.p_conjugate
        return MixedNormParams(
            p=p_dual,
            group=self.group,
            weight=PowerWeight(self.weight.a * (1.0 - p_dual)),
            sphere_n=self.sphere_n,
            panel_width=self.panel_width,
            panel_nodes=self.panel_nodes,
            scan_step=self.scan_step,
            scan_max=self.scan_max,
        )


@functools.lru_cache(maxsize=16)
def _sphere_rule(d: int, kappa: Tuple[float, ...], n: int) -> SphereRule:
    return sphere_rule(d, kappa, n)


# Mixed norm


def sphere_energy(func: PointFunction, rule: SphereRule, r: ArrayLike) -> NDArray[np.float64]:
    """
    ∫ |f(rω)|² h_κ²(ω) dσ(ω) for each r.

    func may return shape (M,) or (M, k); components of vector-valued f are summed.
    """
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    pts = (rs[:, None, None] * rule.points[None, :, :]).reshape(-1, rule.d)
    values = np.asarray(func(pts), dtype=float).reshape(len(rs), rule.size, -1)
    return np.einsum("i,rik->r", rule.weights, values * values)


def _radial_integrand(
    energy: NDArray[np.float64], r: NDArray[np.float64], params: MixedNormParams
) -> NDArray[np.float64]:
    return np.maximum(energy, 0.0) ** (params.p / 2.0) * r**params.radial_exponent


def radial_cutoff(func: PointFunction, params: MixedNormParams) -> float:
    """
    R* beyond which the radial integrand stays below TAIL_FRACTION of its peak.

    Returns 0 when f vanishes on the whole scan.

    Raises:
        AccuracyError: If the integrand has not decayed by params.scan_max
    """
    grid = np.arange(1, int(round(params.scan_max / params.scan_step)) + 1) * params.scan_step
    integrand = _radial_integrand(sphere_energy(func, params.sphere_rule(), grid), grid, params)
    peak = float(np.max(integrand))
    if peak == 0.0:
        return 0.0
    above = np.nonzero(integrand > TAIL_FRACTION * peak)[0]
    last = int(above[-1])
    if last == len(grid) - 1:
        raise AccuracyError(
            f"Radial integrand still above {TAIL_FRACTION:g} of its peak at r={params.scan_max}"
        )
    return float(grid[last] + params.scan_step)


@dataclass(frozen=True)
class MixedNormValue:
    value: float
    r_star: float


def evaluate_mixed_norm(func: PointFunction, params: MixedNormParams) -> MixedNormValue:
    """Mixed norm together with the radial truncation point used for it."""
    r_star = radial_cutoff(func, params)
    if r_star == 0.0:
        return MixedNormValue(0.0, 0.0)
    nodes, weights = power_panel_rule(
        params.radial_exponent, r_star, params.panel_width, params.panel_nodes
    )
    energy = sphere_energy(func, params.sphere_rule(), nodes)
    total = float(np.sum(weights * np.maximum(energy, 0.0) ** (params.p / 2.0)))
    return MixedNormValue(total ** (1.0 / params.p), r_star)


def mixed_norm(func: PointFunction, params: MixedNormParams) -> float:
    """
    (∫₀^∞ (∫_{S^{d−1}} |f(rω)|² h_κ²(ω) dσ(ω))^{p/2} w(r) r^{d+2γ−1} dr)^{1/p}.

    Sphere rule inside, composite Gauss rule with the r^{a+d+2γ−1} factor outside.

    Raises:
        AccuracyError: If the radial tail does not decay within the scan range
    """
    return evaluate_mixed_norm(func, params).value


def coefficient_function(f: SpectralCoeffs) -> PointFunction:
    return lambda pts: synthesize(f, pts)


def vector_function(fs: Sequence[SpectralCoeffs]) -> PointFunction:
    return lambda pts: np.stack([synthesize(f, pts) for f in fs], axis=-1)


def dyadic_blocks(func: PointFunction, params: MixedNormParams, j_max: int) -> Tuple[float, ...]:
    """
    The radial integral split over [0, 1] and the annuli [2^{j−1}, 2^j], j = 1..j_max.

    For rapidly decreasing f the blocks decay faster than any power of 2^{−j}.
    """
    if j_max < 0:
        raise DomainError(f"Block count must be nonnegative, got {j_max}")
    rule = params.sphere_rule()
    blocks = []
    nodes, weights = power_panel_rule(params.radial_exponent, 1.0, 0.25, params.panel_nodes)
    energy = sphere_energy(func, rule, nodes)
    blocks.append(float(np.sum(weights * np.maximum(energy, 0.0) ** (params.p / 2.0))))

    t, w = gauss_legendre(params.panel_nodes)
    for j in range(1, j_max + 1):
        lo, hi = 2.0 ** (j - 1), 2.0**j
        panels = int(math.ceil((hi - lo) / params.panel_width))
        h = (hi - lo) / panels
        r = np.concatenate([lo + i * h + 0.5 * h * (1.0 + t) for i in range(panels)])
        wr = np.tile(0.5 * h * w, panels)
        integrand = _radial_integrand(sphere_energy(func, rule, r), r, params)
        blocks.append(float(np.sum(wr * integrand)))
    return tuple(blocks)


@dataclass(frozen=True)
class HolderCheck:
    pairing: float
    bound: float


def holder_check(f: SpectralCoeffs, g: SpectralCoeffs, params: MixedNormParams) -> HolderCheck:
    """|⟨f, g⟩| against ‖f‖_{L^{p,2}(w)} ‖g‖_{L^{p',2}(w^{1−p'})}."""
    pairing = abs(float(sum(c * g.entries.get(k, 0.0) for k, c in f.items())))
    bound = mixed_norm(coefficient_function(f), params) * mixed_norm(
        coefficient_function(g), params.dual()
    )
    return HolderCheck(pairing, bound)


# A_p^δ power weights


def _check_ap_args(p: float, delta: float) -> None:
    if not 1.0 < p < math.inf:
        raise DomainError(f"p must satisfy 1 < p < inf, got {p}")
    if delta < -0.5:
        raise DomainError(f"A_p index must satisfy delta >= -1/2, got {delta}")


def _power_integral(e: float, u: float, v: float) -> float:
    """∫_u^v r^e dr, +inf when divergent at 0."""
    if u == 0.0 and e <= -1.0:
        return math.inf
    if e == -1.0:
        return math.log(v / u)
    return (v ** (e + 1.0) - u ** (e + 1.0)) / (e + 1.0)


def ap_quotient(weight: PowerWeight, u: float, v: float, p: float, delta: float) -> float:
    """
    A_p quotient of w on I = [u, v] for dμ_δ = r^{2δ+1} dr.

    (μ(I)^{−1} ∫_I w dμ) (μ(I)^{−1} ∫_I w^{−1/(p−1)} dμ)^{p−1}, from closed-form power
    integrals; +inf when either integral diverges.
    """
    _check_ap_args(p, delta)
    if not 0.0 <= u < v:
        raise DomainError(f"Interval must satisfy 0 <= u < v, got [{u}, {v}]")
    base = 2.0 * delta + 1.0
    mass = _power_integral(base, u, v)
    first = _power_integral(weight.a + base, u, v)
    second = _power_integral(-weight.a / (p - 1.0) + base, u, v)
    if math.isinf(first) or math.isinf(second):
        return math.inf
    return (first / mass) * (second / mass) ** (p - 1.0)


@dataclass(frozen=True)
class ApVerdict:
    a: float
    p: float
    delta: float
    admissible: bool
    lower: float
    upper: float
    sampled_sup: float

    @property
    def margin(self) -> float:
        """Distance to the nearer endpoint; negative outside the admissible range."""
        return min(self.a - self.lower, self.upper - self.a)

    @property
    def consistent(self) -> bool:
        """The sampled quotients are bounded exactly when the weight is admissible."""
        return math.isfinite(self.sampled_sup) == self.admissible


def ap_check(a: float, p: float, delta: float) -> ApVerdict:
    """
    Admissibility of r^a in A_p^δ: −(2δ+2) < a < (2δ+2)(p−1).

    The characterization is cross-checked by sampling the quotient on [0, v], [v, 2v] and
    short intervals [v, v(1 + 10^{−3})] for v between 2^{−8} and 2^8.
    """
    _check_ap_args(p, delta)
    lower = -(2.0 * delta + 2.0)
    upper = (2.0 * delta + 2.0) * (p - 1.0)
    weight = PowerWeight(a)
    sup = 0.0
    for k in range(-8, 9):
        v = 2.0**k
        for lo, hi in ((0.0, v), (v, 2.0 * v), (v, v * 1.001)):
            sup = max(sup, ap_quotient(weight, lo, hi, p, delta))
    return ApVerdict(a, p, delta, lower < a < upper, lower, upper, sup)


def ap_growth_ratios(
    a: float, p: float, delta: float, radii: Sequence[float] = (1.0, 2.0, 4.0, 8.0)
) -> Tuple[float, ...]:
    """∫₀^R w dμ_δ / R^{2p(δ+1)} for each R, integrated numerically."""
    _check_ap_args(p, delta)
    out = []
    for radius in radii:
        _, weights = power_panel_rule(a + 2.0 * delta + 1.0, radius, radius / 4.0, 8)
        out.append(float(np.sum(weights)) / radius ** (2.0 * p * (delta + 1.0)))
    return tuple(out)


# Riesz decomposition on spheres


def lambda_values(
    group: ReflectionGroupZ2d, basis: HHarmonicBasis, source: str, degrees: Sequence[int]
) -> Dict[int, float]:
    """
    λ_d(m, γ) per degree.

    measured: Rayleigh quotient on the sphere rule; paper: m(m+λ_κ); exact: m(m+2λ_κ).
    """
    if source not in LAMBDA_SOURCES:
        raise DomainError(f"Unknown lambda source {source!r}; expected one of {LAMBDA_SOURCES}")
    lam = group.lambda_kappa
    out = {}
    for m in degrees:
        if source == "paper":
            out[m] = m * (m + lam)
        elif source == "exact":
            out[m] = m * (m + 2.0 * lam)
        else:
            out[m] = verify_prop32(group, basis, m).measured if m > 0 else 0.0
    return out


@dataclass(frozen=True)
class Prop33Report:
    r: NDArray[np.float64]
    lhs: NDArray[np.float64]
    rhs: NDArray[np.float64]
    lambdas: Mapping[int, float]
    lambda_source: str
    matches: str

    @property
    def residuals(self) -> NDArray[np.float64]:
        return np.abs(self.lhs - self.rhs)

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if len(self.r) else 0.0


def _invariant_degrees(basis: HHarmonicBasis, n_max: int) -> List[int]:
    return [m for m in range(n_max + 1) if basis.invariant_dim(m) > 0]


def verify_prop33(
    f: SpectralCoeffs,
    basis: HHarmonicBasis,
    r_grid: Sequence[float],
    lambda_source: str = "measured",
    rule: Optional[SphereRule] = None,
) -> Prop33Report:
    """
    Σ_j ∫|R_j f(rω)|² h_κ² dσ against Σ_{m,j} |(∂_r + r)F_{m,j}(r)|² + λ_d(m)/r² |F_{m,j}(r)|².

    F = H^{−1/2} f with f replaced by its G-average; the radial derivative of F_{m,j} comes
    from the Laguerre expansion of F̃_{m,j}.

    Raises:
        DomainError: If d ≠ 2 or the basis does not reach the truncation of f
    """
    group = basis.group
    if group.d != 2:
        raise DomainError("Sphere decomposition of the Riesz vector is checked for d = 2 only")
    f = g_symmetrize(f)
    if basis.m_max < f.n_max:
        raise DomainError(f"Basis degree {basis.m_max} is below the truncation N={f.n_max}")
    rule = rule or basis.sphere_rule()
    r = np.asarray(r_grid, dtype=float)

    table = ladder_table(group, f.n_max + 1)
    riesz = [apply_riesz(j, f, table) for j in range(group.d)]
    lhs = sphere_energy(vector_function(riesz), rule, r)

    big_f = apply_h_inv_sqrt(f)
    big_func = coefficient_function(big_f)
    degrees = _invariant_degrees(basis, f.n_max)
    lambdas = lambda_values(group, basis, lambda_source, degrees)
    rhs = np.zeros_like(r)
    for m in degrees:
        for j, y in enumerate(basis.members[m]):
            if not y.g_invariant:
                continue
            values = project_radial(big_func, basis, m, j, r, rule).values
            coeffs = radial_laguerre_coeffs(big_func, basis, m, j, (f.n_max - m) // 2 + 1, rule)
            ladder = m / r * values + r**m * ladder_values(coeffs, r)
            rhs = rhs + ladder**2 + lambdas[m] / r**2 * values**2

    positive = [m for m in degrees if m > 0]
    matches = verify_prop32(group, basis, positive[0], rule).matches if positive else "n/a"
    report = Prop33Report(r, lhs, rhs, lambdas, lambda_source, matches)
    logger.debug(
        f"Riesz sphere decomposition ({lambda_source} lambda): max residual "
        f"{report.max_residual:.3e}"
    )
    return report


@dataclass(frozen=True)
class ConnectionReport:
    m: int
    j: int
    inverse_sqrt: ProportionalityCheck
    derivative_deviation: float

    @property
    def constant(self) -> float:
        return self.inverse_sqrt.constant


def _radial_ladder_function(big_f: SpectralCoeffs, table: LadderTable) -> PointFunction:
    """x ↦ Σ_j ω_j (A_j F)(x), which is (∂_r + r)F for G-invariant F."""
    lowered = [apply_ladder(j, big_f, False, table) for j in range(big_f.group.d)]

    def func(pts: NDArray[np.float64]) -> NDArray[np.float64]:
        radius = np.linalg.norm(pts, axis=-1)
        return sum(pts[:, j] / radius * synthesize(g, pts) for j, g in enumerate(lowered))

    return func


def verify_laguerre_connection(
    f: SpectralCoeffs,
    basis: HHarmonicBasis,
    m: int,
    j: int,
    r_grid: Sequence[float],
    rule: Optional[SphereRule] = None,
) -> ConnectionReport:
    """
    F_{m,j} = c r^m L_δ^{−1/2} f̃_{m,j} and (∂_r + r)F_{m,j} = c r^m R^δ f̃_{m,j} + c m/r F_{m,j}
    with δ = d/2 + γ + m − 1 and F = H^{−1/2} f.

    One constant c is fitted on the first relation and reused in the second, whose left side
    is synthesized from the oscillator ladders A_j = T_j + x_j.
    """
    group = basis.group
    if group.d != 2:
        raise DomainError("The Laguerre connection is checked for d = 2 only")
    if not basis.member(m, j).g_invariant:
        raise DomainError(f"Member ({m}, {j + 1}) is not G-invariant")
    f = g_symmetrize(f)
    rule = rule or basis.sphere_rule()
    r = np.asarray(r_grid, dtype=float)

    big_f = apply_h_inv_sqrt(f)
    small = radial_laguerre_coeffs(
        coefficient_function(f), basis, m, j, max((f.n_max - m) // 2, 0) + 1, rule
    )
    lhs1 = project_radial(coefficient_function(big_f), basis, m, j, r, rule).values
    rhs1 = r**m * l_inv_sqrt(small).evaluate(r)
    check = fit_constant(r, lhs1, rhs1)

    table = ladder_table(group, f.n_max + 1)
    lhs2 = project_radial(_radial_ladder_function(big_f, table), basis, m, j, r, rule).values
    rhs2 = check.constant * (r**m * riesz_laguerre(small)(r) + m / r * lhs1)
    deviation = float(np.max(np.abs(lhs2 - rhs2))) if len(r) else 0.0
    return ConnectionReport(m, j, check, deviation)


# Rotation average in the plane


@dataclass(frozen=True)
class RotationAverage:
    lhs: float
    rhs: float
    expected: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs


def rotation_average_check(
    func: PointFunction,
    p: float,
    weight: PowerWeight = PowerWeight(),
    radial_n: int = 160,
    angles: int = 64,
) -> RotationAverage:
    """
    ∫_{ℝ²} (∫_{SO(2)} |f(kx)|² dk)^{p/2} w(|x|) dx against ∫₀^∞ (∫_{S¹} |f(rω)|² dσ)^{p/2} w r dr.

    Left side in polar coordinates: the rotation average over equally spaced angles, then one
    Gauss–Jacobi rule on [0, R*] carrying r^{a+1}. Right side: the mixed norm with κ = 0.
    The ratio is expected to be (2π)^{1−p/2}.
    """
    if weight.a <= -2.0:
        raise DomainError(f"Weight r^{weight.a} is not integrable at 0 in the plane")
    params = MixedNormParams(p, ReflectionGroupZ2d.classical(2), weight, sphere_n=angles // 4)
    result = evaluate_mixed_norm(func, params)
    rhs = result.value**p
    radius = max(result.r_star, params.scan_step)

    t, w = gauss_jacobi(0.0, weight.a + 1.0, radial_n)
    r = 0.5 * radius * (1.0 + t)
    wr = (0.5 * radius) ** (weight.a + 2.0) * w

    theta = 2.0 * np.pi * np.arange(angles) / angles
    circle = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    points = (r[:, None, None] * circle[None, :, :]).reshape(-1, 2)
    values = np.asarray(func(points), dtype=float).reshape(len(r), angles, -1)
    average = np.mean(np.sum(values * values, axis=-1), axis=1)
    lhs = float(2.0 * np.pi * np.sum(wr * np.maximum(average, 0.0) ** (p / 2.0)))
    return RotationAverage(lhs, rhs, (2.0 * np.pi) ** (1.0 - p / 2.0))


# Norm-ratio probe


def norm_ratios(
    f: SpectralCoeffs, params: MixedNormParams, table: Optional[LadderTable] = None
) -> Dict[str, float]:
    """
    ‖R_j f‖/‖f‖ in L^{p,2}(w) for j = 1..d (keys "1".."d") and for |Rf| (key "vec").
    """
    table = table or ladder_table(f.group, f.n_max + 1)
    base = mixed_norm(coefficient_function(f), params)
    if base == 0.0:
        raise DomainError("Norm ratios need f != 0")
    riesz = [apply_riesz(j, f, table) for j in range(f.group.d)]
    out = {
        str(j + 1): mixed_norm(coefficient_function(g), params) / base
        for j, g in enumerate(riesz)
    }
    out["vec"] = mixed_norm(vector_function(riesz), params) / base
    return out


@dataclass(frozen=True)
class ProbeRow:
    seed: int
    trial: int
    n: int
    p: float
    a: float
    kappa: Tuple[str, ...]
    component: str
    ratio: float

    def as_csv_row(self) -> List[str]:
        return [
            str(self.seed),
            str(self.trial),
            str(self.n),
            repr(self.p),
            repr(self.a),
            *self.kappa,
            self.component,
            repr(self.ratio),
        ]


@dataclass(frozen=True)
class ProbeTable:
    rows: Tuple[ProbeRow, ...]
    verdict: ApVerdict
    n_list: Tuple[int, ...] = field(default=())

    def sup_by_n(self, component: Optional[str] = None) -> Dict[int, float]:
        out: Dict[int, float] = {}
        for row in self.rows:
            if component is None or row.component == component:
                out[row.n] = max(out.get(row.n, 0.0), row.ratio)
        return out

    def summary(self) -> Dict[str, Any]:
        return {
            "p": self.verdict.p,
            "a": self.verdict.a,
            "admissible": self.verdict.admissible,
            "margin": self.verdict.margin,
            "sup_ratio": {str(n): v for n, v in sorted(self.sup_by_n().items())},
            "sup_ratio_vec": {str(n): v for n, v in sorted(self.sup_by_n("vec").items())},
        }


def probe_header(d: int) -> List[str]:
    return ["seed", "trial", "N", "p", "a"] + [f"kappa{j + 1}" for j in range(d)] + ["j", "ratio"]


def _probe_trial(params: MixedNormParams, seed: int, n: int, trial: int) -> List[ProbeRow]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, trial]))
    f = random_invariant_coeffs(params.group, n, rng)
    ratios = norm_ratios(f, params)
    kappa = tuple(params.group.kappa_labels)
    return [
        ProbeRow(seed, trial, n, params.p, params.weight.a, kappa, key, value)
        for key, value in ratios.items()
    ]


def norm_ratio_probe(
    params: MixedNormParams,
    trials: int,
    seed: int,
    n_list: Sequence[int],
    workers: int = 1,
    require_admissible: bool = True,
) -> ProbeTable:
    """
    Empirical ratios ‖R_j f‖/‖f‖ for random unit f ∈ V_G at each truncation N.

    Trial t at truncation N draws from SeedSequence([seed, N, t]), so the table does not
    depend on the number of workers; rows come back in (N, trial) order.

    Raises:
        PreconditionError: If r^a is not in A_p^{d/2+γ−1} and require_admissible is set
    """
    verdict = ap_check(params.weight.a, params.p, params.delta)
    if not verdict.admissible:
        if require_admissible:
            raise PreconditionError(
                f"Weight r^{params.weight.a} is not in A_{params.p}^{params.delta:g}: "
                f"need {verdict.lower:g} < a < {verdict.upper:g}"
            )
        logger.warning(f"Probing inadmissible weight r^{params.weight.a} at p={params.p}")

    tasks = [(n, trial) for n in n_list for trial in range(trials)]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda task: _probe_trial(params, seed, *task), tasks))
    rows = tuple(row for chunk in results for row in chunk)
    table = ProbeTable(rows, verdict, tuple(n_list))
    logger.info(f"Norm probe p={params.p} a={params.weight.a}: sup by N {table.sup_by_n()}")
    return table


@dataclass(frozen=True)
class BoundarySweep:
    """Sup ratios for r^a with a approaching the upper end of the A_p range."""

    p: float
    upper: float
    exponents: Tuple[float, ...]
    sup_ratios: Tuple[float, ...]

    @property
    def increasing(self) -> bool:
        return all(b >= a for a, b in zip(self.sup_ratios, self.sup_ratios[1:]))

    def summary(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "upper": self.upper,
            "exponents": list(self.exponents),
            "sup_ratio": list(self.sup_ratios),
            "increasing": self.increasing,
        }


def boundary_sweep(
    p: float,
    group: ReflectionGroupZ2d,
    fractions: Sequence[float],
    trials: int,
    seed: int,
    n: int,
    workers: int = 1,
    sphere_n: int = 24,
) -> BoundarySweep:
    """
    Sup over trials of max_j ‖R_j f‖/‖f‖ at a = s·(2δ+2)(p−1) for each fraction s in (0, 1).

    Fractions are visited in ascending order; every weight is admissible.
    """
    if any(not 0.0 < s < 1.0 for s in fractions):
        raise DomainError(f"Boundary fractions must lie in (0, 1), got {list(fractions)}")
    params = MixedNormParams(p, group, sphere_n=sphere_n)
    upper = ap_check(0.0, p, params.delta).upper
    exponents = tuple(s * upper for s in sorted(fractions))
    sups = []
    for a in exponents:
        weighted = MixedNormParams(p, group, PowerWeight(a), sphere_n=sphere_n)
        table = norm_ratio_probe(weighted, trials, seed, [n], workers=workers)
        sups.append(max(table.sup_by_n().values(), default=0.0))
    sweep = BoundarySweep(p, upper, exponents, tuple(sups))
    logger.info(
        f"Boundary sweep p={p}: sup ratios {sweep.sup_ratios}, increasing {sweep.increasing}"
    )
    return sweep
