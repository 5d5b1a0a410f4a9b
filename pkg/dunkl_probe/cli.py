"""
Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or config errors.
"""

import argparse
import asyncio
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from dunkl_probe import __version__
from dunkl_probe.config import Config, parse_override, set_config
from dunkl_probe.errors import ConfigError, DunklProbeError
from dunkl_probe.hermite_engine import SpectralCoeffs, indices_up_to, mehler_kernel, mehler_spectral
from dunkl_probe.hharmonics import MAX_HARMONIC_DEGREE, build_basis, project_all, sphere_parseval
from dunkl_probe.mixed_norm import (
    MixedNormParams,
    PowerWeight,
    ap_check,
    boundary_sweep,
    coefficient_function,
    norm_ratio_probe,
    probe_header,
)
from dunkl_probe.quadrature import radial_rule, sphere_rule
from dunkl_probe.report import CheckRecord, ProbeReport, SuiteResult
from dunkl_probe.suites import SPECTRAL_TAIL_LIMIT, SuiteRunner, kernel_rows
from dunkl_probe.utils import format_duration, save_json, setup_logging, write_csv
from dunkl_probe.validation import ConfigValidator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

LAGUERRE_KERNEL_TOL = 1e-10
MEHLER_KERNEL_TOL = 1e-8
PLANCHEREL_TOL = 1e-9
GROWTH_LIMIT = 0.05
PARSEVAL_TOL = 1e-9


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML configuration file")
    common.add_argument("--seed", type=int, help="Root seed, 0 <= seed < 2^64")
    common.add_argument("--out", metavar="DIR", help="Output directory")
    common.add_argument(
        "--suite", action="append", default=[], metavar="NAME", help="Suite to run (repeatable)"
    )
    common.add_argument("--tolerance-scale", type=float, help="Multiplier for every tolerance")
    common.add_argument("--workers", type=int, help="Worker threads of the norm sweep")
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a config value, e.g. --set group.kappa=[0,0]",
    )

    parser = argparse.ArgumentParser(
        prog="dunkl-probe", description="Dunkl harmonic oscillator verification suites"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="Run the verification suites")
    sub.add_parser("kernel-compare", parents=[common], help="Closed-form against spectral kernels")
    sub.add_parser("norm-sweep", parents=[common], help="Empirical Riesz norm ratios")
    sub.add_parser("decompose", parents=[common], help="h-harmonic expansion of a random f")
    export = sub.add_parser("export-basis", parents=[common], help="Write the h-harmonic basis")
    export.add_argument("--m-max", type=int, help="Highest degree (default grids.m_max)")
    return parser


def load_config(args: argparse.Namespace) -> Config:
    """
    Build and validate the configuration of one invocation.

    Raises:
        ConfigError: If the file cannot be read or validation fails
    """
    config = Config(args.config)
    for item in args.set:
        key, value = parse_override(item)
        config.override(key, value)
    if args.seed is not None:
        config.override("seed", args.seed)
    if args.out:
        config.override("output.dir", args.out)
    if args.suite:
        config.override("runner.suites", list(args.suite))
    if args.tolerance_scale is not None:
        config.override("tolerance.scale", args.tolerance_scale)
    if args.workers is not None:
        config.override("norm.workers", args.workers)

    is_valid, errors, warnings = ConfigValidator(config).validate()
    for warning in warnings:
        logger.warning(warning)
    if not is_valid:
        raise ConfigError("Invalid configuration: " + "; ".join(errors))

    set_config(config)
    return config


def _new_report(command: str, config: Config) -> ProbeReport:
    return ProbeReport(
        command=command,
        config=config.resolved(),
        seed=config.seed,
        library_version=__version__,
    )


def _output(config: Config, name: str) -> str:
    return str(Path(config.output_dir) / name)


def _dump_rules(config: Config) -> None:
    group = config.group
    rule = radial_rule(group.lambda_kappa, config.radial_n)
    write_csv(_output(config, "radial_rule.csv"), ["r", "w"], rule.to_rows())
    if group.d >= 2:
        sphere = sphere_rule(group.d, group.kappa, config.sphere_n)
        header = [f"omega{j + 1}" for j in range(group.d)] + ["w"]
        write_csv(_output(config, "sphere_rule.csv"), header, sphere.to_rows())


# verify


def cmd_verify(config: Config) -> int:
    """Run the selected suites and write report.json."""
    report = _new_report("verify", config)
    start_time = time.monotonic()

    async def run() -> None:
        report.suites = await SuiteRunner(config).run_suites(config.suites)
        report.timing = {"total_sec": time.monotonic() - start_time}
        report.timing.update({s.suite: s.elapsed_sec for s in report.suites})
        report.save(_output(config, "report.json"))

    asyncio.run(run())
    if config.dump_rules:
        _dump_rules(config)

    for suite in report.suites:
        for record in suite.failed_records:
            logger.error(f"{suite.suite}/{record.name}: {record.value:.3e} > {record.tolerance}")
    logger.info(
        f"verify finished in {format_duration(report.timing['total_sec'])}: "
        f"{'all passed' if report.passed else 'FAILED'}"
    )
    return EXIT_OK if report.passed else EXIT_FAILED


# kernel-compare


def _mehler_rows(config: Config) -> List[List[object]]:
    group = config.group
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 7]))
    xs = rng.uniform(-1.5, 1.5, size=(4, group.d))
    ys = rng.uniform(-1.5, 1.5, size=(4, group.d))
    levels = config.hermite_levels
    rows: List[List[object]] = []
    for t in config.t_grid:
        closed = np.atleast_1d(mehler_kernel(group, t, xs, ys))
        spectral = np.atleast_1d(mehler_spectral(group, t, xs, ys, levels))
        coarse = np.atleast_1d(mehler_spectral(group, t, xs, ys, levels - 10))
        for i in range(len(xs)):
            tail = abs(spectral[i] - coarse[i])
            if tail > SPECTRAL_TAIL_LIMIT * abs(closed[i]):
                rel, status = float("nan"), "closed-form-only"
            else:
                rel, status = abs(closed[i] - spectral[i]) / abs(spectral[i]), "compared"
            point = [*xs[i].tolist(), *ys[i].tolist()]
            rows.append([t, *point, float(closed[i]), float(spectral[i]), rel, status])
    return rows


def cmd_kernel_compare(config: Config) -> int:
    """Write the Laguerre and Mehler kernel grids; fail if a compared row is off."""
    start_time = time.monotonic()
    report = _new_report("kernel-compare", config)
    records = []

    header = ["delta", "t", "r", "s", "closed", "spectral", "rel_err", "status"]
    all_rows = []
    for delta in config.delta_list:
        rows = kernel_rows(delta, config.t_grid, config.r_grid, config.spectral_terms)
        all_rows.extend(rows)
        compared = [row[6] for row in rows if row[7] == "compared"]
        flagged = [row for row in rows if row[7] != "compared"]
        for row in flagged:
            logger.warning(f"Laguerre kernel row delta={delta} t={row[1]} is closed-form-only")
        records.append(
            CheckRecord.residual(
                f"laguerre_delta{delta:g}",
                "closed-form Laguerre heat kernel = spectral sum",
                max(compared, default=0.0),
                LAGUERRE_KERNEL_TOL * config.tolerance_scale,
                closed_form_only_rows=len(flagged),
            )
        )
    write_csv(_output(config, "laguerre_kernels.csv"), header, all_rows)

    d = config.dimension
    mehler = _mehler_rows(config)
    mehler_header = (
        ["t"] + [f"x{j + 1}" for j in range(d)] + [f"y{j + 1}" for j in range(d)]
        + ["closed", "spectral", "rel_err", "status"]
    )
    write_csv(_output(config, "mehler_kernels.csv"), mehler_header, mehler)
    for row in mehler:
        if row[-1] != "compared":
            logger.warning(f"Mehler kernel row t={row[0]} is closed-form-only")
    records.append(
        CheckRecord.residual(
            "mehler",
            "closed-form oscillator heat kernel = Σ_α e^{−(2|α|+d+2γ)t} Φ_α(x)Φ_α(y)",
            max((float(row[-2]) for row in mehler if row[-1] == "compared"), default=0.0),
            MEHLER_KERNEL_TOL * config.tolerance_scale,
            closed_form_only_rows=sum(1 for row in mehler if row[-1] != "compared"),
        )
    )

    elapsed = time.monotonic() - start_time
    report.suites = [SuiteResult.from_records("kernel-compare", records, elapsed)]
    report.timing = {"total_sec": elapsed}
    report.summary = {r.name: r.value for r in records}
    report.save(_output(config, "report.json"))
    return EXIT_OK if report.passed else EXIT_FAILED


# norm-sweep


def cmd_norm_sweep(config: Config) -> int:
    """
    Probe ‖R_j f‖/‖f‖ over the (p, a) grid; CSV rows do not depend on --workers.

    With norm.boundary_fractions set, each p also gets a sweep of a toward the A_p upper end.
    """
    start_time = time.monotonic()
    report = _new_report("norm-sweep", config)
    group = config.group
    delta = group.d / 2.0 + group.gamma - 1.0
    records: List[CheckRecord] = []
    rows = []
    cells = []

    for p in config.p_list:
        for a in config.weight_exponents:
            verdict = ap_check(a, p, delta)
            if not verdict.admissible and not config.exploratory:
                logger.warning(f"Skipping inadmissible weight r^{a} at p={p}")
                records.append(
                    CheckRecord(
                        f"skipped_p{p:g}_a{a:g}",
                        "r^a ∈ A_p^δ",
                        verdict.margin,
                        None,
                        True,
                        {"skipped": True, "lower": verdict.lower, "upper": verdict.upper},
                    )
                )
                continue

            params = MixedNormParams(p, group, PowerWeight(a), sphere_n=config.sphere_n)
            table = norm_ratio_probe(
                params,
                config.trials,
                config.seed,
                config.n_list,
                workers=config.workers,
                require_admissible=not config.exploratory,
            )
            rows.extend(row.as_csv_row() for row in table.rows)
            summary = table.summary()
            cells.append(summary)

            sups = table.sup_by_n()
            if 16 in sups and 32 in sups and sups[16] > 0.0:
                growth = sups[32] / sups[16] - 1.0
                records.append(
                    CheckRecord(
                        f"growth_p{p:g}_a{a:g}",
                        "sup ratio bounded in N (growth from N = 16 to 32)",
                        growth,
                        GROWTH_LIMIT,
                        growth < GROWTH_LIMIT or not verdict.admissible,
                        {"admissible": verdict.admissible},
                    )
                )
            if p == 2.0 and a == 0.0:
                sup = max(table.sup_by_n("vec").values(), default=0.0)
                records.append(
                    CheckRecord.residual(
                        "plancherel_bound",
                        "‖Rf‖_{L²} ≤ ‖f‖_{L²} on V_G (excess over 1)",
                        max(sup - 1.0, 0.0),
                        PLANCHEREL_TOL * config.tolerance_scale,
                        sup_ratio=sup,
                    )
                )

    boundary = []
    if config.boundary_fractions and config.n_list:
        n = max(config.n_list)
        for p in config.p_list:
            sweep = boundary_sweep(
                p,
                group,
                config.boundary_fractions,
                config.boundary_trials,
                config.seed,
                n,
                workers=config.workers,
                sphere_n=config.sphere_n,
            )
            boundary.append(sweep.summary())
            records.append(
                CheckRecord.observation(
                    f"boundary_p{p:g}",
                    "sup ratio as a → (2δ+2)(p−1)",
                    sweep.sup_ratios[-1],
                    n=n,
                    **sweep.summary(),
                )
            )

    write_csv(_output(config, "norm_sweep.csv"), probe_header(group.d), rows)
    save_json({"cells": cells, "boundary": boundary}, _output(config, "norm_sweep_summary.json"))

    elapsed = time.monotonic() - start_time
    report.suites = [SuiteResult.from_records("norm-sweep", records, elapsed)]
    report.timing = {"total_sec": elapsed}
    report.summary = {"cells": cells, "boundary": boundary}
    report.save(_output(config, "report.json"))
    return EXIT_OK if report.passed else EXIT_FAILED


# decompose


def cmd_decompose(config: Config) -> int:
    """Tabulate f_{m,j}(r) and f̃_{m,j}(r) of a random f ∈ V and check sphere Parseval."""
    group = config.group
    if group.d < 2:
        raise ConfigError("decompose needs d >= 2")
    start_time = time.monotonic()
    report = _new_report("decompose", config)

    n = config.truncation
    m_max = min(n, MAX_HARMONIC_DEGREE)
    basis = build_basis(group, m_max)
    rule = basis.sphere_rule(n // 2 + 2)
    indices = indices_up_to(group.d, n)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed]))
    values = rng.standard_normal(len(indices))
    f = SpectralCoeffs(group, dict(zip(indices, (values / np.linalg.norm(values)).tolist())), n)
    func = coefficient_function(f)

    r = np.asarray(config.r_grid, dtype=float)
    projections = project_all(func, basis, r, rule)
    rows = []
    for (m, j), vals in sorted(projections.items()):
        for radius, v in zip(r, vals):
            rows.append([float(radius), m, j + 1, float(v), float(v / radius**m)])
    write_csv(_output(config, "decompose.csv"), ["r", "m", "j", "f_mj", "f_tilde"], rows)

    sums, totals = sphere_parseval(func, basis, r, rule)
    gaps = np.abs(sums - totals) / np.maximum(np.abs(totals), 1e-300)
    write_csv(
        _output(config, "parseval.csv"),
        ["r", "sum_squares", "sphere_norm_sq", "rel_gap"],
        [[float(a), float(b), float(c), float(g)] for a, b, c, g in zip(r, sums, totals, gaps)],
    )
    record = CheckRecord.residual(
        "sphere_parseval",
        "Σ_{m,j} |f_{m,j}(r)|² = ∫|f(rω)|² h_κ² dσ",
        float(np.max(gaps)),
        PARSEVAL_TOL * config.tolerance_scale,
        complete=m_max >= n,
    )
    if m_max < n:
        record.passed = True
        logger.warning(f"Basis stops at degree {m_max} < N={n}; Parseval gap only reported")

    elapsed = time.monotonic() - start_time
    report.suites = [SuiteResult.from_records("decompose", [record], elapsed)]
    report.timing = {"total_sec": elapsed}
    report.save(_output(config, "report.json"))
    return EXIT_OK if report.passed else EXIT_FAILED


# export-basis


def cmd_export_basis(config: Config, m_max: Optional[int] = None) -> int:
    """Write the orthonormal h-harmonic basis as JSON."""
    group = config.group
    if group.d < 2:
        raise ConfigError("export-basis needs d >= 2")
    basis = build_basis(group, config.m_max if m_max is None else m_max)
    path = _output(config, "basis.json")
    save_json(basis.to_dict(), path)
    logger.info(f"Basis up to degree {basis.m_max} written to {path}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[Config], int]] = {
    "verify": cmd_verify,
    "kernel-compare": cmd_kernel_compare,
    "norm-sweep": cmd_norm_sweep,
    "decompose": cmd_decompose,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    setup_logging()
    try:
        config = load_config(args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_USAGE
    setup_logging(config.log_level, config.log_format)

    try:
        if args.command == "export-basis":
            return cmd_export_basis(config, args.m_max)
        return COMMANDS[args.command](config)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except DunklProbeError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
