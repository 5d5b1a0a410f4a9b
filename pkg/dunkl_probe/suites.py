"""
Verification suites and the async runner that executes them.

Each suite is a plain function from a SuiteContext to a list of CheckRecords. The runner
executes suites in worker threads with a per-suite timeout and a concurrency bound, and
assembles the results in the requested order.
"""

import asyncio
import functools
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from dunkl_probe.config import Config, get_config
from dunkl_probe.dunkl_core import (
    MultiPoly,
    ReflectionGroupZ2d,
    dunkl_directional,
    dunkl_kernel,
    dunkl_kernel_series_1d,
    dunkl_laplacian,
    dunkl_op,
    dunkl_op_numeric,
    monomials_of_degree,
    parse_rational,
)
from dunkl_probe.errors import DunklProbeError
from dunkl_probe.hermite_engine import (
    SpectralCoeffs,
    analyze,
    apply_heat,
    eigen_residual,
    factorization_defect,
    g_symmetrize,
    indices_up_to,
    ladder_table,
    mehler_constant,
    mehler_constant_closed,
    mehler_kernel,
    mehler_spectral,
    random_invariant_coeffs,
    riesz_adjoint_defect,
    synthesize,
)
from dunkl_probe.hharmonics import (
    HHarmonicBasis,
    build_basis,
    funk_hecke_bessel,
    funk_hecke_kernel,
    gram_by_quadrature,
    harmonic_dimension,
    spherical_laplacian_eigenvalue,
    verify_prop21,
    verify_prop31,
    verify_prop32,
)
from dunkl_probe.laguerre_ops import (
    LaguerreCoeffs,
    heat_kernel_closed,
    heat_kernel_spectral,
    l_inv_sqrt,
    l_inv_sqrt_time_integral,
    laguerre_operator_residual,
    measure_laguerre_ladder,
    psi_table,
    vector_ratio_probe,
)
from dunkl_probe.mixed_norm import (
    MixedNormParams,
    PowerWeight,
    ap_check,
    ap_growth_ratios,
    coefficient_function,
    dyadic_blocks,
    holder_check,
    norm_ratios,
    rotation_average_check,
    verify_laguerre_connection,
    verify_prop33,
)
from dunkl_probe.quadrature import product_rule, radial_rule, sphere_rule
from dunkl_probe.report import (
    STATUS_ERROR,
    STATUS_SKIPPED,
    STATUS_TIMEOUT,
    CheckRecord,
    SuiteResult,
)

logger = logging.getLogger(__name__)

SUITE_NAMES = (
    "dunkl",
    "hermite",
    "laguerre",
    "hharmonics",
    "prop21",
    "laguerre_connection",
    "prop33",
    "funk_hecke",
    "rotation_average",
    "norm",
)

# Kernel comparisons are asserted on this window of heat times.
KERNEL_T_RANGE = (0.3, 2.0)
# Spectral rows whose tail estimate exceeds this fraction of the value are not compared.
SPECTRAL_TAIL_LIMIT = 1e-12


class SuiteSkipped(DunklProbeError):
    """Raised by a suite whose preconditions do not hold for the configured group."""


@dataclass(frozen=True)
class SuiteContext:
    """Everything a suite reads: configuration, group, seed and tolerance scale."""

    config: Config
    group: ReflectionGroupZ2d
    seed: int
    tolerance_scale: float = 1.0

    @classmethod
    def from_config(cls, config: Config) -> "SuiteContext":
        return cls(config, config.group, config.seed, config.tolerance_scale)

    def tol(self, base: float) -> float:
        return base * self.tolerance_scale

    def rng(self, suite: str, *stream: int) -> np.random.Generator:
        """Generator owned by one suite; independent of execution order."""
        key = SUITE_NAMES.index(suite) if suite in SUITE_NAMES else len(SUITE_NAMES)
        return np.random.default_rng(np.random.SeedSequence([self.seed, key, *stream]))

    def require_dimension(self, low: int, high: Optional[int] = None) -> None:
        d = self.group.d
        if d < low or (high is not None and d > high):
            span = f"d = {low}" if high == low else f"d >= {low}"
            raise SuiteSkipped(f"Needs {span}, configured d = {d}")


SuiteFunction = Callable[[SuiteContext], List[CheckRecord]]


@functools.lru_cache(maxsize=8)
def _basis(group: ReflectionGroupZ2d, m_max: int) -> HHarmonicBasis:
    return build_basis(group, m_max)


def _t_window(ctx: SuiteContext) -> List[float]:
    lo, hi = KERNEL_T_RANGE
    return [t for t in ctx.config.t_grid if lo <= t <= hi] or [0.5]


def _random_poly(rng: np.random.Generator, d: int, degree: int, terms: int = 4) -> MultiPoly:
    pool = [e for m in range(degree + 1) for e in monomials_of_degree(d, m)]
    picks = rng.choice(len(pool), size=min(terms, len(pool)), replace=False)
    coeffs = rng.integers(1, 6, size=len(picks)) * rng.choice([-1, 1], size=len(picks))
    return MultiPoly(d, {pool[i]: int(c) for i, c in zip(picks, coeffs)})


def _lowered(group: ReflectionGroupZ2d, poly: MultiPoly, j: int) -> MultiPoly:
    """Polynomial part of T_j(P e^{−|x|²/2}), which is T_jP − x_jP."""
    return dunkl_op(group, j, poly) - poly.times_variable(j)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# dunkl


def _random_kappa(rng: np.random.Generator, d: int) -> ReflectionGroupZ2d:
    numerators = rng.integers(0, 13, size=d)
    denominators = rng.integers(1, 9, size=d)
    return ReflectionGroupZ2d(
        tuple(Fraction(int(a), int(b)) for a, b in zip(numerators, denominators))
    )


def _random_kappa_records(ctx: SuiteContext, draws: int = 3) -> List[CheckRecord]:
    """Commutativity, [T_j, x_j] and h-harmonicity for random rational κ in d = 1, 2, 3."""
    rng = ctx.rng("dunkl", 1)
    commute = commutator = harmonic = 0
    drawn = []
    for d in (1, 2, 3):
        for _ in range(draws):
            group = _random_kappa(rng, d)
            drawn.append([str(k) for k in group.kappa_exact])
            poly = _random_poly(rng, d, 6, terms=5)
            for i in range(d):
                shifted = dunkl_op(group, i, poly.times_variable(i))
                lhs = shifted - dunkl_op(group, i, poly).times_variable(i)
                rhs = poly + poly.reflect(i) * (2 * group.kappa_exact[i])
                commutator = max(commutator, len((lhs - rhs).terms))
                for j in range(i + 1, d):
                    diff = dunkl_op(group, i, dunkl_op(group, j, poly)) - dunkl_op(
                        group, j, dunkl_op(group, i, poly)
                    )
                    commute = max(commute, len(diff.terms))
            if d >= 2:
                basis = build_basis(group, 4, exact=True)
                for _, _, y in basis.items():
                    harmonic = max(harmonic, len(dunkl_laplacian(group, y.poly).terms))
    return [
        CheckRecord.residual(
            "commutativity_random_kappa",
            "T_i T_j P = T_j T_i P (exact)",
            commute,
            0.0,
            kappa=drawn,
        ),
        CheckRecord.residual(
            "commutator_random_kappa", "[T_j, x_j] P = P + 2κ_j P∘σ_j (exact)", commutator, 0.0
        ),
        CheckRecord.residual(
            "harmonicity_random_kappa", "Δ_κ Y = 0 for the basis up to degree 4", harmonic, 0.0
        ),
    ]


def suite_dunkl(ctx: SuiteContext) -> List[CheckRecord]:
    group, d = ctx.group, ctx.group.d
    rng = ctx.rng("dunkl")
    records = []

    worst_terms = 0
    degree = 8 if d <= 3 else 6
    for _ in range(6):
        poly = _random_poly(rng, d, degree, terms=6)
        for i in range(d):
            for j in range(i + 1, d):
                diff = dunkl_op(group, i, dunkl_op(group, j, poly)) - dunkl_op(
                    group, j, dunkl_op(group, i, poly)
                )
                worst_terms = max(worst_terms, len(diff.terms))
    records.append(
        CheckRecord.residual(
            "commutativity", "T_i T_j P = T_j T_i P (exact)", worst_terms, 0.0, degree=degree
        )
    )

    mismatches = 0
    for j in range(d):
        image = dunkl_op(group, j, MultiPoly.variable(d, j))
        expected = MultiPoly.constant(d, 1 + 2 * group.kappa_exact[j])
        mismatches += int(image != expected)
    records.append(
        CheckRecord.residual("dunkl_on_coordinate", "T_j x_j = 1 + 2κ_j", mismatches, 0.0)
    )
    records.extend(_random_kappa_records(ctx))

    if d >= 2:
        f = MultiPoly.variable(d, 0).times_variable(0)
        g = MultiPoly.variable(d, 1)
        xi = [Fraction(int(v), 7) for v in rng.integers(-6, 7, size=d)]
        lhs = dunkl_directional(group, xi, f * g)
        rhs = f * dunkl_directional(group, xi, g) + dunkl_directional(group, xi, f) * g
        records.append(
            CheckRecord.residual(
                "leibniz_invariant_factor",
                "T_ξ(fg) = f T_ξ g + (T_ξ f) g for G-invariant f",
                len((lhs - rhs).terms),
                0.0,
            )
        )

    # Integration by parts against h_κ² on P e^{−|x|²/2}.
    rule = product_rule(group.kappa, 12 if d <= 2 else 8)
    pts = rule.points
    gauss = np.exp(-np.sum(pts**2, axis=1))
    anti = grad = 0.0
    for _ in range(3):
        p, q = _random_poly(rng, d, 4), _random_poly(rng, d, 4)
        pv, qv = p.evaluate(pts), q.evaluate(pts)
        lap_p = MultiPoly.zero(d)
        energy = 0.0
        for j in range(d):
            tp, tq = _lowered(group, p, j), _lowered(group, q, j)
            left = float(rule.integrate(tp.evaluate(pts) * qv * gauss))
            right = float(rule.integrate(pv * tq.evaluate(pts) * gauss))
            anti = max(anti, abs(left + right) / max(abs(left), 1.0))
            energy += float(rule.integrate(tp.evaluate(pts) * tq.evaluate(pts) * gauss))
            lap_p = lap_p + _lowered(group, tp, j)
        lap = float(rule.integrate(lap_p.evaluate(pts) * qv * gauss))
        grad = max(grad, abs(energy + lap) / max(abs(energy), 1.0))
    records.append(
        CheckRecord.residual(
            "antisymmetry", "∫(T_j f) g h_κ² = −∫ f (T_j g) h_κ²", anti, ctx.tol(1e-9)
        )
    )
    records.append(
        CheckRecord.residual(
            "gradient_identity", "∫⟨∇^κ f, ∇^κ g⟩ h_κ² = −∫(Δ_κ f) g h_κ²", grad, ctx.tol(1e-9)
        )
    )

    x = rng.uniform(-1.5, 1.5, size=d)
    y = rng.uniform(-1.5, 1.5, size=d)
    series = math.prod(
        dunkl_kernel_series_1d(k, float(x[j] * y[j])) for j, k in enumerate(group.kappa_exact)
    )
    records.append(
        CheckRecord.residual(
            "kernel_series",
            "E_κ(x, y) = Π_j E_κj(x_j y_j) against the eigen-equation series",
            _rel(float(dunkl_kernel(group, x, y)), series),
            ctx.tol(1e-10),
        )
    )
    records.append(
        CheckRecord.residual(
            "kernel_symmetry",
            "E_κ(x, y) = E_κ(y, x)",
            _rel(float(dunkl_kernel(group, x, y)), float(dunkl_kernel(group, y, x))),
            ctx.tol(1e-12),
        )
    )
    records.append(
        CheckRecord.residual(
            "kernel_origin",
            "E_κ(0, y) = 1",
            abs(float(dunkl_kernel(group, np.zeros(d), y)) - 1.0),
            ctx.tol(1e-14),
        )
    )

    grid = rng.uniform(-1.0, 1.0, size=(8, d))
    eig = 0.0
    for j in range(d):
        numeric = dunkl_op_numeric(group, j, lambda p: np.asarray(dunkl_kernel(group, p, y)), grid)
        exact = y[j] * np.asarray(dunkl_kernel(group, grid, y))
        eig = max(eig, float(np.max(np.abs(numeric - exact) / np.abs(exact))))
    records.append(
        CheckRecord.residual(
            "kernel_eigen_property", "T_j E_κ(·, y) = y_j E_κ(·, y)", eig, ctx.tol(1e-6)
        )
    )
    return records


# hermite


def suite_hermite(ctx: SuiteContext) -> List[CheckRecord]:
    group, d = ctx.group, ctx.group.d
    rng = ctx.rng("hermite")
    records = []

    max_degree = 8 if d <= 3 and group.supports_exact else 4
    nonzero = 0
    for index in indices_up_to(d, max_degree):
        nonzero = max(nonzero, len(eigen_residual(index, group).terms))
    records.append(
        CheckRecord.residual(
            "eigenfunction_residual",
            "(−Δ_κ + |x|²)Φ_α = (2|α|+d+2γ)Φ_α (exact)",
            nonzero,
            0.0,
            max_degree=max_degree,
            checked=len(indices_up_to(d, max_degree)),
        )
    )

    levels = 32
    table = ladder_table(group, levels)
    consistency = max(
        abs(table.consistency_residual(index)) for index in indices_up_to(d, levels)
    )
    records.append(
        CheckRecord.residual(
            "ladder_consistency",
            "H = ½Σ_j (A_j A_j* + A_j* A_j) on tabulated levels",
            consistency,
            ctx.tol(1e-10),
            levels=levels,
        )
    )
    records.append(
        CheckRecord.residual(
            "ladder_closed_form",
            "d_j(n) = √(2[n]_κ), u_j(n) = √(2[n+1]_κ)",
            table.closed_form_deviation(),
            ctx.tol(1e-10 if group.is_classical else 1e-8),
        )
    )

    defect = 0.0
    for index in indices_up_to(d, 6):
        result = factorization_defect(group, index.alpha)
        defect = max(defect, abs(result.measured - result.expected))
    records.append(
        CheckRecord.residual(
            "factorization_defect",
            "H − d − Σ_j A_j*A_j = 2Σ_j κ_j σ_j",
            defect,
            ctx.tol(1e-9),
        )
    )

    n_max = min(ctx.config.truncation, 8)
    indices = indices_up_to(d, n_max)
    f = SpectralCoeffs(group, dict(zip(indices, rng.standard_normal(len(indices)).tolist())), n_max)
    recovered = analyze(lambda p: synthesize(f, p), group, n_max)
    coeff_err = max(abs(recovered.coefficient(k.alpha) - c) for k, c in f.items())
    records.append(
        CheckRecord.residual(
            "synthesis_projection_round_trip",
            "(Σ c_β Φ_β, Φ_α) = c_α",
            coeff_err,
            ctx.tol(1e-9),
        )
    )

    g = SpectralCoeffs(group, dict(zip(indices, rng.standard_normal(len(indices)).tolist())), n_max)
    adjoint = max(abs(riesz_adjoint_defect(j, f, g)) for j in range(d))
    records.append(
        CheckRecord.observation("riesz_adjoint_defect", "⟨R_j f, g⟩ − ⟨f, R_j* g⟩", adjoint)
    )

    t = float(rng.uniform(0.3, 1.0))
    lhs = apply_heat(t, g_symmetrize(f))
    rhs = g_symmetrize(apply_heat(t, f))
    records.append(
        CheckRecord.residual(
            "heat_preserves_invariants",
            "e^{−tH} f^# = (e^{−tH} f)^#",
            float(max((abs(lhs.coefficient(k.alpha) - c) for k, c in rhs.items()), default=0.0)),
            0.0,
        )
    )

    worst = 0.0
    levels_mehler = ctx.config.hermite_levels
    for t in _t_window(ctx):
        xs = rng.uniform(-1.5, 1.5, size=(4, d))
        ys = rng.uniform(-1.5, 1.5, size=(4, d))
        closed = np.asarray(mehler_kernel(group, t, xs, ys))
        spectral = np.asarray(mehler_spectral(group, t, xs, ys, levels_mehler))
        worst = max(worst, float(np.max(np.abs(closed - spectral) / np.abs(spectral))))
    records.append(
        CheckRecord.residual(
            "mehler_against_spectral",
            "closed-form heat kernel = Σ_α e^{−(2|α|+d+2γ)t} Φ_α(x)Φ_α(y)",
            worst,
            ctx.tol(1e-8),
            levels=levels_mehler,
        )
    )
    records.append(
        CheckRecord.residual(
            "mehler_constant",
            "calibrated c = Π_j 2^{−κ_j−1/2}/Γ(κ_j+1/2)",
            _rel(mehler_constant(group), mehler_constant_closed(group)),
            ctx.tol(1e-10),
        )
    )
    return records


# laguerre


def kernel_rows(
    delta: float, t_grid: Sequence[float], r_grid: Sequence[float], terms: int
) -> List[Tuple[float, float, float, float, float, float, float, str]]:
    """
    Closed-form Laguerre heat kernel against its spectral sum on t × r × r.

    A row is marked "closed-form-only" when the spectral tail estimate is not negligible;
    such rows carry NaN for the spectral value and are left out of the comparison.
    """
    rows = []
    for t in t_grid:
        for r in r_grid:
            for s in r_grid:
                closed = float(heat_kernel_closed(delta, t, r, s))
                spectral = heat_kernel_spectral(delta, t, r, s, terms)
                if spectral.tail_bound > SPECTRAL_TAIL_LIMIT * abs(closed):
                    rows.append((delta, t, r, s, closed, math.nan, math.nan, "closed-form-only"))
                    continue
                rel = _rel(closed, spectral.value)
                rows.append((delta, t, r, s, closed, spectral.value, rel, "compared"))
    return rows


def suite_laguerre(ctx: SuiteContext) -> List[CheckRecord]:
    rng = ctx.rng("laguerre")
    records = []
    deltas = ctx.config.delta_list

    ortho = 0.0
    for delta in deltas:
        rule = radial_rule(delta, 32)
        table = psi_table(20, delta, rule.nodes)
        gram = np.array([[float(rule.integrate(a * b)) for b in table] for a in table])
        ortho = max(ortho, float(np.max(np.abs(gram - np.eye(len(table))))))
    records.append(
        CheckRecord.residual("psi_orthonormality", "⟨ψ_j^δ, ψ_k^δ⟩ = δ_jk", ortho, ctx.tol(1e-10))
    )

    nonzero = 0
    for delta in deltas:
        exact = parse_rational(delta)
        for k in range(9):
            nonzero = max(nonzero, len(laguerre_operator_residual(k, exact).terms))
    records.append(
        CheckRecord.residual(
            "laguerre_eigenfunctions", "L_δ ψ_k = (4k+2δ+2) ψ_k (exact)", nonzero, 0.0
        )
    )

    r_grid = [r for r in ctx.config.r_grid if 0.1 <= r <= 4.0] or [1.0]
    compared, skipped = 0.0, 0
    for delta in deltas:
        for row in kernel_rows(delta, _t_window(ctx), r_grid, ctx.config.spectral_terms):
            if row[-1] == "compared":
                compared = max(compared, row[6])
            else:
                skipped += 1
    records.append(
        CheckRecord.residual(
            "heat_kernel_closed_vs_spectral",
            "closed-form Laguerre heat kernel = Σ_k e^{−(4k+2δ+2)t} ψ_k(r)ψ_k(s)",
            compared,
            ctx.tol(1e-10),
            closed_form_only_rows=skipped,
        )
    )

    ladder = 0.0
    for delta in deltas:
        matrix = measure_laguerre_ladder(delta, 10)
        expected = np.zeros_like(matrix)
        for k in range(1, len(matrix)):
            expected[k, k - 1] = -2.0 * math.sqrt(k)
        ladder = max(ladder, float(np.max(np.abs(matrix - expected))))
    records.append(
        CheckRecord.residual(
            "laguerre_ladder", "(∂_r + r)ψ_k^δ = −2√k r ψ_{k−1}^{δ+1}", ladder, ctx.tol(1e-9)
        )
    )

    f = LaguerreCoeffs.from_array(deltas[0], rng.standard_normal(8))
    direct = l_inv_sqrt(f).as_array()
    integral = l_inv_sqrt_time_integral(f).as_array()
    records.append(
        CheckRecord.residual(
            "inverse_sqrt_time_integral",
            "L^{−1/2} = π^{−1/2}∫ e^{−tL} t^{−1/2} dt",
            float(np.max(np.abs(direct - integral))),
            ctx.tol(1e-8),
        )
    )

    for kind in ("riesz", "inverse_sqrt"):
        probe = vector_ratio_probe(kind, max(deltas[0], 0.0), 2.0, 0.0, 5, ctx.seed)
        records.append(
            CheckRecord.observation(
                f"vector_{kind}_sup_ratio",
                "vector-valued Laguerre inequality, empirical sup ratio",
                probe.sup_ratio,
                delta=probe.delta,
                p=probe.p,
                a=probe.a,
            )
        )
    return records


# hharmonics


def suite_hharmonics(ctx: SuiteContext) -> List[CheckRecord]:
    ctx.require_dimension(2)
    group, d = ctx.group, ctx.group.d
    m_max = 8 if d <= 3 else 6
    basis = _basis(group, m_max)
    records = []

    worst_dim = max(abs(basis.dim(m) - harmonic_dimension(d, m)) for m in range(m_max + 1))
    records.append(
        CheckRecord.residual(
            "dimensions", "dim H_m = dim P_m − dim P_{m−2}", worst_dim, 0.0, m_max=m_max
        )
    )

    residual = 0.0
    for _, _, y in basis.items():
        image = dunkl_laplacian(group, y.poly)
        residual = max(residual, max((abs(float(v)) for _, v in image.items()), default=0.0))
    records.append(
        CheckRecord.residual(
            "harmonicity",
            "Δ_κ Y = 0" + (" (exact)" if basis.exact else ""),
            residual,
            0.0 if basis.exact else ctx.tol(1e-9),
        )
    )

    gram = max(
        float(np.max(np.abs(gram_by_quadrature(basis, m) - np.eye(basis.dim(m)))))
        for m in range(m_max + 1)
    )
    records.append(
        CheckRecord.residual(
            "orthonormality", "∫ Y_i Y_j h_κ² dσ = δ_ij", gram, ctx.tol(1e-10)
        )
    )

    report = verify_prop31(group, basis)
    for name, value in (
        ("tangential", report.tangential),
        ("radial", report.radial),
        ("divergence", report.divergence),
        ("orthogonality", report.orthogonality),
        ("euler", report.euler),
    ):
        records.append(
            CheckRecord.residual(
                f"sphere_gradient_{name}",
                "spherical h-gradient identities",
                value,
                ctx.tol(1e-9),
                pairs_checked=report.pairs_checked,
            )
        )

    for m in range(1, m_max + 1):
        if basis.invariant_dim(m) == 0:
            continue
        result = verify_prop32(group, basis, m)
        target = result.homogeneity_candidate
        records.append(
            CheckRecord.residual(
                f"rayleigh_quotient_m{m}",
                "∫|∇_0^κ Y|² h_κ² dσ = λ_d(m, γ) ∫ Y² h_κ² dσ",
                abs(result.measured - target) / max(1.0, target),
                ctx.tol(1e-8),
                measured=result.measured,
                alt_candidate=result.alt_candidate,
                homogeneity_candidate=target,
                matches=result.matches,
            )
        )

    worst = 0.0
    for m, j, y in basis.items():
        if m > 6:
            break
        eig = spherical_laplacian_eigenvalue(group, y)
        worst = max(worst, eig.residual, abs(eig.measured - eig.homogeneity_candidate))
    records.append(
        CheckRecord.residual(
            "spherical_laplacian_eigenvalue",
            "Δ_{κ,0} Y = −m(m+2λ_κ) Y",
            worst,
            ctx.tol(1e-9),
        )
    )
    return records


# Decomposition suites, d = 2


def _decomposition_setup(
    ctx: SuiteContext, suite: str, m_max: int
) -> Tuple[HHarmonicBasis, List[SpectralCoeffs]]:
    ctx.require_dimension(2, 2)
    basis = _basis(ctx.group, m_max)
    fs = [
        random_invariant_coeffs(ctx.group, ctx.config.truncation, ctx.rng(suite, i))
        for i in range(ctx.config.random_functions)
    ]
    return basis, fs


def _invariant_pairs(basis: HHarmonicBasis, m_max: int) -> List[Tuple[int, int]]:
    return [
        (m, j)
        for m in range(min(m_max, basis.m_max) + 1)
        for j, y in enumerate(basis.members[m])
        if y.g_invariant
    ]


def suite_prop21(ctx: SuiteContext) -> List[CheckRecord]:
    m_max = min(ctx.config.m_max, 4)
    basis, fs = _decomposition_setup(ctx, "prop21", m_max)
    r_grid = ctx.config.r_grid
    records = []
    for m, j in _invariant_pairs(basis, m_max):
        constants, spreads, unresolved = [], [], 0
        for f in fs:
            for t in _t_window(ctx):
                check = verify_prop21(ctx.group, basis, f, t, m, j, r_grid)
                if not check.resolved:
                    unresolved += 1
                    continue
                constants.append(check.constant)
                spreads.append(check.spread)
        if not constants:
            records.append(
                CheckRecord.observation(
                    f"heat_projection_m{m}_j{j + 1}",
                    "(e^{−tH}f)_{m,j}(r) = r^m T_t^{λ_κ+m} f̃_{m,j}(r)",
                    math.nan,
                    unresolved=unresolved,
                )
            )
            continue
        records.append(
            CheckRecord.residual(
                f"heat_projection_m{m}_j{j + 1}",
                "(e^{−tH}f)_{m,j}(r) = r^m T_t^{λ_κ+m} f̃_{m,j}(r)",
                max(max(spreads), max(abs(c - 1.0) for c in constants)),
                ctx.tol(1e-6),
                constant_min=min(constants),
                constant_max=max(constants),
                unresolved=unresolved,
            )
        )
    return records


def suite_laguerre_connection(ctx: SuiteContext) -> List[CheckRecord]:
    m_max = min(ctx.config.m_max, 4)
    basis, fs = _decomposition_setup(ctx, "laguerre_connection", m_max)
    r_grid = ctx.config.r_grid
    records = []
    for m, j in _invariant_pairs(basis, m_max):
        reports = [verify_laguerre_connection(f, basis, m, j, r_grid) for f in fs]
        constants = [rep.constant for rep in reports]
        records.append(
            CheckRecord.residual(
                f"inverse_sqrt_m{m}_j{j + 1}",
                "(H^{−1/2}f)_{m,j} = r^m L_{δ}^{−1/2} f̃_{m,j}, δ = d/2+γ+m−1",
                max(
                    max(rep.inverse_sqrt.spread for rep in reports),
                    max(abs(c - 1.0) for c in constants),
                ),
                ctx.tol(1e-6),
                constant_min=min(constants),
                constant_max=max(constants),
            )
        )
        records.append(
            CheckRecord.residual(
                f"radial_ladder_m{m}_j{j + 1}",
                "Σ_j ω_j A_j F = (∂_r + r)F on the (m, j) component",
                max(rep.derivative_deviation for rep in reports),
                ctx.tol(1e-6),
            )
        )
    return records


def suite_prop33(ctx: SuiteContext) -> List[CheckRecord]:
    n = ctx.config.truncation
    basis, fs = _decomposition_setup(ctx, "prop33", n)
    r_grid = [r for r in ctx.config.r_grid if 0.2 <= r <= 3.0] or [1.0]
    source = ctx.config.lambda_source
    reports = [verify_prop33(f, basis, r_grid, source) for f in fs]
    worst = max(rep.max_residual for rep in reports)
    return [
        CheckRecord.residual(
            "riesz_sphere_decomposition",
            "Σ_j ∫|R_j f|² h_κ² dσ = Σ_{m,j} |(∂_r + r)F_{m,j}|² + λ_d(m,γ)/r² |F_{m,j}|²",
            worst,
            ctx.tol(1e-6),
            lambda_source=source,
            functions=len(reports),
            truncation=n,
        ),
        CheckRecord.observation(
            "lambda_candidate_match",
            "measured λ_d(m, γ) against m(m+λ_κ) and m(m+2λ_κ)",
            reports[0].lambdas.get(2, 0.0) if reports else 0.0,
            matches=reports[0].matches if reports else "n/a",
        ),
    ]


# funk_hecke


def suite_funk_hecke(ctx: SuiteContext) -> List[CheckRecord]:
    ctx.require_dimension(2)
    group = ctx.group
    z_grid = [z for z in ctx.config.z_grid if 0.1 <= z <= 20.0] or [1.0]
    records = []

    for m in range(7):
        rows = [funk_hecke_bessel(group, m, z) for z in z_grid]
        ratios = np.array([row.ratio for row in rows])
        closed = rows[0].closed_form
        records.append(
            CheckRecord.residual(
                f"bessel_form_m{m}",
                "∫ e^{itz} C_m^λ(t)(1−t²)^{λ−½} dt ∝ J_{λ+m}(z)/z^λ",
                float(np.max(np.abs(ratios / closed - 1.0))),
                ctx.tol(1e-7),
                ratio_min=float(ratios.min()),
                ratio_max=float(ratios.max()),
                closed_form=closed,
            )
        )

    basis = _basis(group, 4)
    rule = sphere_rule(group.d, group.kappa, ctx.config.sphere_n)
    rng = ctx.rng("funk_hecke")
    worst = 0.0
    for m, j, _ in basis.items():
        x = rng.standard_normal(group.d)
        x = x / np.linalg.norm(x) * rng.uniform(0.5, 1.5)
        row = funk_hecke_kernel(basis, m, j, x, float(rng.uniform(0.5, 1.5)), rule)
        if abs(row.bessel) < 1e-8:
            continue
        worst = max(worst, abs(row.ratio / row.closed_form - 1.0))
    records.append(
        CheckRecord.residual(
            "dunkl_kernel_form",
            "∫ E_κ(x, sy) Y(y) h_κ² dσ(y) ∝ 𝓘_{λ+m}(|x|s)/(|x|s)^λ Y(x')",
            worst,
            ctx.tol(1e-7),
        )
    )
    return records


# rotation_average


def suite_rotation_average(ctx: SuiteContext) -> List[CheckRecord]:
    ctx.require_dimension(2, 2)
    classical = ReflectionGroupZ2d.classical(2)
    indices = indices_up_to(2, 6)
    funcs = []
    for i in range(10):
        values = ctx.rng("rotation_average", i).standard_normal(len(indices))
        funcs.append(coefficient_function(SpectralCoeffs(classical, dict(zip(indices, values)), 6)))

    weights = [a for a in ctx.config.weight_exponents if a > -2.0] or [0.0]
    records = []
    for p in ctx.config.p_list:
        for a in weights:
            results = [rotation_average_check(func, p, PowerWeight(a)) for func in funcs]
            ratios = np.array([res.ratio for res in results])
            expected = results[0].expected
            records.append(
                CheckRecord.residual(
                    f"rotation_average_p{p:g}_a{a:g}",
                    "∫(∫_{SO(2)}|f(kx)|²dk)^{p/2} w dx = (2π)^{1−p/2} ‖f‖^p_{L^{p,2}(w)}",
                    float(np.max(np.abs(ratios / expected - 1.0))),
                    ctx.tol(1e-7),
                    ratio_min=float(ratios.min()),
                    ratio_max=float(ratios.max()),
                    expected=expected,
                )
            )
    return records


# norm


def suite_norm(ctx: SuiteContext) -> List[CheckRecord]:
    ctx.require_dimension(2)
    group = ctx.group
    records = []
    delta = group.d / 2.0 + group.gamma - 1.0

    params = MixedNormParams(2.0, group, PowerWeight(0.0), sphere_n=ctx.config.sphere_n)
    n = min(ctx.config.truncation, 8)
    table = ladder_table(group, n + 1)
    sup = 0.0
    for i in range(min(ctx.config.trials, 5)):
        f = random_invariant_coeffs(group, n, ctx.rng("norm", i))
        sup = max(sup, norm_ratios(f, params, table)["vec"])
    records.append(
        CheckRecord.residual(
            "plancherel_bound",
            "‖Rf‖_{L²} ≤ ‖f‖_{L²} on V_G (excess over 1)",
            max(sup - 1.0, 0.0),
            ctx.tol(1e-9),
            sup_ratio=sup,
        )
    )

    for p in ctx.config.p_list:
        for a in ctx.config.weight_exponents:
            verdict = ap_check(a, p, delta)
            records.append(
                CheckRecord(
                    f"ap_weight_p{p:g}_a{a:g}",
                    "r^a ∈ A_p^δ iff −(2δ+2) < a < (2δ+2)(p−1)",
                    verdict.margin,
                    None,
                    verdict.consistent,
                    {
                        "admissible": verdict.admissible,
                        "sampled_sup": verdict.sampled_sup,
                        "growth": list(ap_growth_ratios(a, p, delta)),
                    },
                )
            )

    f = random_invariant_coeffs(group, n, ctx.rng("norm", 100))
    g = random_invariant_coeffs(group, n, ctx.rng("norm", 101))
    p = ctx.config.p_list[0]
    holder = holder_check(
        f, g, MixedNormParams(p, group, PowerWeight(0.0), sphere_n=ctx.config.sphere_n)
    )
    records.append(
        CheckRecord(
            "holder_duality",
            "|∫ f g h_κ²| ≤ ‖f‖_{L^{p,2}(w)} ‖g‖_{L^{p',2}(w^{1−p'})}",
            holder.pairing,
            None,
            abs(holder.pairing) <= holder.bound * (1.0 + ctx.tol(1e-9)),
            {"bound": holder.bound},
        )
    )

    blocks = dyadic_blocks(coefficient_function(f), params, 6)
    records.append(
        CheckRecord.observation(
            "dyadic_blocks",
            "‖f‖^p split over dyadic annuli",
            float(sum(blocks)),
            blocks=list(blocks),
        )
    )
    return records


SUITES: Dict[str, SuiteFunction] = {
    "dunkl": suite_dunkl,
    "hermite": suite_hermite,
    "laguerre": suite_laguerre,
    "hharmonics": suite_hharmonics,
    "prop21": suite_prop21,
    "laguerre_connection": suite_laguerre_connection,
    "prop33": suite_prop33,
    "funk_hecke": suite_funk_hecke,
    "rotation_average": suite_rotation_average,
    "norm": suite_norm,
}


class SuiteRunner:
    """Runs suites concurrently in worker threads with per-suite timeouts."""

    def __init__(
        self,
        config: Optional[Config] = None,
        registry: Optional[Dict[str, SuiteFunction]] = None,
    ) -> None:
        """
        Initialize runner.

        Args:
            config: Configuration; the global instance if None
            registry: Suite functions by name; the built-in suites if None
        """
        self.config = config or get_config()
        self.registry = registry if registry is not None else SUITES
        self.context = SuiteContext.from_config(self.config)

    async def run_suite(self, name: str, semaphore: asyncio.Semaphore) -> SuiteResult:
        """
        Run one suite.

        Args:
            name: Suite name
            semaphore: Bound on concurrently running suites

        Returns:
            SuiteResult; exceptions and timeouts are captured, never raised
        """
        timeout_sec = self.config.suite_timeout_sec
        async with semaphore:
            start_time = time.monotonic()
            logger.info(f"Suite {name} started")
            try:
                func = self.registry[name]
                records = await asyncio.wait_for(
                    asyncio.to_thread(func, self.context), timeout=timeout_sec
                )
                result = SuiteResult.from_records(name, records)
            except asyncio.TimeoutError:
                logger.error(f"Suite {name} timed out after {timeout_sec}s")
                result = SuiteResult(
                    name, STATUS_TIMEOUT, error_message=f"Suite exceeded timeout of {timeout_sec}s"
                )
            except SuiteSkipped as e:
                logger.warning(f"Suite {name} skipped: {e}")
                result = SuiteResult(name, STATUS_SKIPPED, error_message=str(e))
            except Exception as e:
                logger.error(f"Suite {name} failed: {e}", exc_info=True)
                result = SuiteResult(name, STATUS_ERROR, error_message=f"{type(e).__name__}: {e}")

            result.elapsed_sec = time.monotonic() - start_time
            logger.info(f"Suite {name} finished: {result.status} in {result.elapsed_sec:.2f}s")
            return result

    async def run_suites(self, names: Sequence[str]) -> List[SuiteResult]:
        """Run the named suites; results follow the order of names."""
        semaphore = asyncio.Semaphore(max(1, self.config.max_concurrent_suites))
        return list(await asyncio.gather(*(self.run_suite(name, semaphore) for name in names)))
