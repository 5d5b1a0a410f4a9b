"""
Configuration validation, run before any computation.
"""

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from dunkl_probe.config import Config, get_config
from dunkl_probe.errors import ConfigError, DomainError
from dunkl_probe.mixed_norm import LAMBDA_SOURCES, ap_check
from dunkl_probe.quadrature import MAX_RADIAL_SIZE, MAX_SPHERE_SIZE
from dunkl_probe.suites import SUITE_NAMES

logger = logging.getLogger(__name__)

MAX_DIMENSION = 4
MAX_TRUNCATION = 64
T_GRID_RANGE = (0.1, 4.0)
MAX_SEED = 2**64
MAX_LINE_SIZE = 256


class ConfigValidator:
    """Validator for probe configuration before execution."""

    def __init__(self, config: Optional[Config] = None) -> None:
        """Initialize validator with configuration."""
        self.config = config or get_config()

    def validate(self, config: Optional[Config] = None) -> Tuple[bool, List[str], List[str]]:
        """
        Validate every precondition the selected suites rely on.

        Args:
            config: Configuration to check instead of the one given at construction

        Returns:
            Tuple of (is_valid, errors, warnings)
        """
        if config is not None:
            self.config = config
        errors: List[str] = []
        warnings: List[str] = []

        checks: List[Callable[[List[str], List[str]], None]] = [
            self._check_group,
            self._check_truncation,
            self._check_quadrature,
            self._check_grids,
            self._check_norm,
            self._check_seed,
            self._check_runner,
        ]
        for check in checks:
            try:
                check(errors, warnings)
            except (ConfigError, DomainError, TypeError, ValueError) as e:
                errors.append(str(e))

        is_valid = len(errors) == 0
        if not is_valid:
            logger.debug(f"Config {self.config.config_path} rejected: {errors}")
        return is_valid, errors, warnings

    def _check_group(self, errors: List[str], warnings: List[str]) -> None:
        d = self.config.dimension
        if not 1 <= d <= MAX_DIMENSION:
            errors.append(f"group.dimension must be in [1, {MAX_DIMENSION}], got {d}")

        kappa = self.config.kappa
        if len(kappa) != d:
            errors.append(f"group.kappa needs {d} entries, got {len(kappa)}")
        negative = [str(k) for k in kappa if k < 0]
        if negative:
            errors.append(f"group.kappa must be nonnegative, got {', '.join(negative)}")

        if d == 1:
            warnings.append("Sphere-based suites need d >= 2 and will be skipped")
        elif d != 2:
            warnings.append("Decomposition suites run for d = 2 only and will be skipped")

    def _check_truncation(self, errors: List[str], warnings: List[str]) -> None:
        n = self.config.truncation
        if not 0 <= n <= MAX_TRUNCATION:
            errors.append(f"truncation.N must be in [0, {MAX_TRUNCATION}], got {n}")
        if self.config.m_max < 0:
            errors.append(f"grids.m_max must be nonnegative, got {self.config.m_max}")

    def _check_quadrature(self, errors: List[str], warnings: List[str]) -> None:
        sizes = [
            ("quadrature.radial_n", self.config.radial_n, MAX_RADIAL_SIZE),
            ("quadrature.sphere_n", self.config.sphere_n, MAX_SPHERE_SIZE),
            ("quadrature.line_n", self.config.line_n, MAX_LINE_SIZE),
        ]
        for key, value, cap in sizes:
            if not 1 <= value <= cap:
                errors.append(f"{key} must be in [1, {cap}], got {value}")

    def _check_grids(self, errors: List[str], warnings: List[str]) -> None:
        t_grid = self.config.t_grid
        lo, hi = T_GRID_RANGE
        if not t_grid:
            errors.append("grids.t_grid must not be empty")
        elif any(not lo <= t <= hi for t in t_grid):
            errors.append(f"grids.t_grid must lie in [{lo}, {hi}], got {t_grid}")

        r_grid = self.config.r_grid
        if not r_grid:
            errors.append("grids.r_grid must not be empty")
        elif any(not (np.isfinite(r) and r > 0.0) for r in r_grid):
            errors.append(f"grids.r_grid must be positive, got {r_grid}")

        if any(z <= 0.0 for z in self.config.z_grid):
            errors.append(f"grids.z_grid must be positive, got {self.config.z_grid}")

    def _check_norm(self, errors: List[str], warnings: List[str]) -> None:
        p_list = self.config.p_list
        bad = [p for p in p_list if not 1.0 < p < np.inf]
        if bad:
            errors.append(f"norm.p_list entries must satisfy 1 < p < inf, got {bad}")
        if any(not 0 <= n <= MAX_TRUNCATION for n in self.config.n_list):
            errors.append(f"norm.n_list entries must be in [0, {MAX_TRUNCATION}]")
        if self.config.trials < 1:
            errors.append(f"norm.trials must be positive, got {self.config.trials}")
        if self.config.workers < 1:
            errors.append(f"norm.workers must be positive, got {self.config.workers}")
        fractions = self.config.boundary_fractions
        if any(not 0.0 < s < 1.0 for s in fractions):
            errors.append(f"norm.boundary_fractions must lie in (0, 1), got {fractions}")
        if self.config.boundary_trials < 1:
            errors.append(
                f"norm.boundary_trials must be positive, got {self.config.boundary_trials}"
            )

        if bad or errors:
            return
        group = self.config.group
        delta = group.d / 2.0 + group.gamma - 1.0
        for p in p_list:
            for a in self.config.weight_exponents:
                verdict = ap_check(a, p, delta)
                if not verdict.admissible:
                    warnings.append(
                        f"Weight r^{a} is outside A_{p} (admissible range "
                        f"({verdict.lower:.4g}, {verdict.upper:.4g})); the sweep skips it"
                    )

    def _check_seed(self, errors: List[str], warnings: List[str]) -> None:
        seed = self.config.get("seed")
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < MAX_SEED:
            errors.append(f"seed must be an integer in [0, 2^64), got {seed!r}")

    def _check_runner(self, errors: List[str], warnings: List[str]) -> None:
        unknown = [s for s in self.config.suites if s not in SUITE_NAMES]
        if unknown:
            errors.append(
                f"Unknown suites: {', '.join(unknown)} (known: {', '.join(SUITE_NAMES)})"
            )
        if self.config.tolerance_scale <= 0.0:
            errors.append(f"tolerance.scale must be positive, got {self.config.tolerance_scale}")
        if self.config.suite_timeout_sec <= 0.0:
            errors.append("runner.suite_timeout_sec must be positive")
        if self.config.max_concurrent_suites < 1:
            errors.append("runner.max_concurrent_suites must be positive")
        if self.config.lambda_source not in LAMBDA_SOURCES:
            errors.append(
                f"prop33.lambda_source must be one of {', '.join(LAMBDA_SOURCES)}, "
                f"got {self.config.lambda_source!r}"
            )
