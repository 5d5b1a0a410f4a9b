"""
Configuration management for probe runs.
"""

import copy
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from dunkl_probe.dunkl_core import ReflectionGroupZ2d, parse_rational
from dunkl_probe.errors import ConfigError, DomainError

ENV_CONFIG_PATH = "DUNKL_PROBE_CONFIG"


class Config:
    """Configuration manager for probe runs."""

    def __init__(
        self, config_path: Optional[str] = None, data: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Initialize configuration.

        Args:
            config_path: Path to config file. If None, uses default config/probe.yaml
            data: Already parsed configuration; skips the file entirely
        """
        if data is not None:
            self.config_path = config_path or "<memory>"
            self.config_data = copy.deepcopy(data)
            return

        if config_path is None:
            config_path = self._find_config_file()

        self.config_path = config_path
        self.config_data = self._load_config()

    def _find_config_file(self) -> str:
        """Find the default config file."""
        possible_paths = [
            Path(__file__).parent.parent / "config" / "probe.yaml",
            Path.cwd() / "config" / "probe.yaml",
        ]
        if os.environ.get(ENV_CONFIG_PATH):
            possible_paths.append(Path(os.environ[ENV_CONFIG_PATH]))

        for path in possible_paths:
            if path.exists():
                return str(path)

        raise ConfigError("Could not find config/probe.yaml")

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        try:
            with open(self.config_path, "r") as f:
                data = yaml.safe_load(f)
        except Exception as e:
            raise ConfigError(f"Failed to load config from {self.config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Failed to load config from {self.config_path}: not a mapping")
        return data

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value by key.

        Args:
            key: Configuration key (supports dot notation, e.g., "group.dimension")
            default: Default value if key not found

        Returns:
            Configuration value
        """
        keys = key.split(".")
        value: Any = self.config_data

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def override(self, key: str, value: Any) -> None:
        """
        Set a value by dot-notation key, creating intermediate sections.

        Args:
            key: Configuration key, e.g. "norm.p_list"
            value: New value; strings are parsed as YAML scalars ("[1.5, 2]" -> list)
        """
        if isinstance(value, str):
            try:
                value = yaml.safe_load(value)
            except yaml.YAMLError as e:
                raise ConfigError(f"Cannot parse override {key}={value!r}: {e}") from e

        keys = key.split(".")
        node = self.config_data
        for k in keys[:-1]:
            child = node.get(k)
            if not isinstance(child, dict):
                child = {}
                node[k] = child
            node = child
        node[keys[-1]] = value

    def resolved(self) -> Dict[str, Any]:
        """Full configuration as embedded in reports."""
        data = copy.deepcopy(self.config_data)
        data.setdefault("group", {})["kappa"] = self.kappa_labels
        return data

    # Group
    @property
    def dimension(self) -> int:
        """Get dimension d."""
        return int(self.get("group.dimension", 2))

    @property
    def kappa_labels(self) -> List[str]:
        """Get multiplicities as written in the config."""
        return [str(k) for k in self.get("group.kappa", [])]

    @property
    def kappa(self) -> List[Fraction]:
        """Get multiplicities as exact rationals."""
        try:
            return [parse_rational(k) for k in self.get("group.kappa", [])]
        except (DomainError, ValueError, TypeError) as e:
            raise ConfigError(f"Invalid group.kappa: {e}") from e

    @property
    def group(self) -> ReflectionGroupZ2d:
        """Get the reflection group built from the multiplicities."""
        return ReflectionGroupZ2d.from_kappa(self.kappa)

    # Truncation
    @property
    def truncation(self) -> int:
        """Get truncation bound N."""
        return int(self.get("truncation.N", 16))

    # Quadrature
    @property
    def radial_n(self) -> int:
        """Get radial rule size."""
        return int(self.get("quadrature.radial_n", 64))

    @property
    def sphere_n(self) -> int:
        """Get sphere rule size per angle."""
        return int(self.get("quadrature.sphere_n", 24))

    @property
    def line_n(self) -> int:
        """Get per-coordinate product rule size."""
        return int(self.get("quadrature.line_n", 48))

    # Grids
    @property
    def t_grid(self) -> List[float]:
        """Get heat times."""
        return [float(t) for t in self.get("grids.t_grid", [])]

    @property
    def r_grid(self) -> List[float]:
        """Get radii."""
        return [float(r) for r in self.get("grids.r_grid", [])]

    @property
    def z_grid(self) -> List[float]:
        """Get Funk-Hecke arguments."""
        return [float(z) for z in self.get("grids.z_grid", [1.0, 5.0, 10.0])]

    @property
    def m_max(self) -> int:
        """Get highest h-harmonic degree of the decomposition suites."""
        return int(self.get("grids.m_max", 4))

    @property
    def random_functions(self) -> int:
        """Get random functions per decomposition check."""
        return int(self.get("grids.random_functions", 20))

    # Kernel comparisons
    @property
    def delta_list(self) -> List[float]:
        """Get Laguerre parameters for kernel comparisons."""
        return [float(v) for v in self.get("kernel.delta_list", [0.9])]

    @property
    def spectral_terms(self) -> int:
        """Get Laguerre spectral truncation."""
        return int(self.get("kernel.spectral_terms", 200))

    @property
    def hermite_levels(self) -> int:
        """Get per-coordinate levels of the Mehler spectral sum."""
        return int(self.get("kernel.hermite_levels", 60))

    # Norm probe
    @property
    def p_list(self) -> List[float]:
        """Get exponents p."""
        return [float(p) for p in self.get("norm.p_list", [2.0])]

    @property
    def weight_exponents(self) -> List[float]:
        """Get power weight exponents a."""
        return [float(a) for a in self.get("norm.weight_exponents", [0.0])]

    @property
    def trials(self) -> int:
        """Get trials per probe cell."""
        return int(self.get("norm.trials", 20))

    @property
    def n_list(self) -> List[int]:
        """Get truncations probed."""
        return [int(n) for n in self.get("norm.n_list", [8, 16, 32])]

    @property
    def boundary_fractions(self) -> List[float]:
        """Get fractions s of the A_p upper end probed by the boundary sweep."""
        return [float(s) for s in self.get("norm.boundary_fractions", [])]

    @property
    def boundary_trials(self) -> int:
        """Get trials per boundary weight."""
        return int(self.get("norm.boundary_trials", 20))

    @property
    def workers(self) -> int:
        """Get probe worker count."""
        return int(self.get("norm.workers", 1))

    @property
    def exploratory(self) -> bool:
        """Get whether inadmissible weights are probed anyway."""
        return bool(self.get("norm.exploratory", False))

    @property
    def seed(self) -> int:
        """Get root seed."""
        return int(self.get("seed", 0))

    # Tolerance
    @property
    def tolerance_scale(self) -> float:
        """Get tolerance multiplier."""
        return float(self.get("tolerance.scale", 1.0))

    # Runner
    @property
    def suite_timeout_sec(self) -> float:
        """Get per-suite timeout."""
        return float(self.get("runner.suite_timeout_sec", 600))

    @property
    def max_concurrent_suites(self) -> int:
        """Get suite concurrency bound."""
        return int(self.get("runner.max_concurrent_suites", 2))

    @property
    def suites(self) -> List[str]:
        """Get selected suites."""
        return [str(s) for s in self.get("runner.suites", [])]

    # Decomposition
    @property
    def lambda_source(self) -> str:
        """Get source of the decomposition eigenvalues."""
        return str(self.get("prop33.lambda_source", "measured"))

    # Output
    @property
    def output_dir(self) -> str:
        """Get output directory."""
        return str(self.get("output.dir", "results"))

    @property
    def dump_rules(self) -> bool:
        """Get whether quadrature rules are dumped."""
        return bool(self.get("output.dump_rules", False))

    # Logging
    @property
    def log_level(self) -> str:
        """Get log level."""
        return str(self.get("logging.level", "INFO"))

    @property
    def log_format(self) -> str:
        """Get log format."""
        return str(self.get("logging.format", "text"))


def parse_override(text: str) -> Tuple[str, str]:
    """Split a "--set" argument "a.b=value" into (key, raw value)."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"Override must look like key=value, got {text!r}")
    return key.strip(), value


# Global config instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get global config instance."""
    global _config
    if _config is None:
        _config = Config()
    return _config


def set_config(config: Config) -> None:
    """Set global config instance."""
    global _config
    _config = config
