"""
Exception hierarchy for dunkl_probe.

Each class also derives from the closest builtin so callers catching
ValueError / RuntimeError keep working.
"""


class DunklProbeError(Exception):
    """Base class for all library errors."""


class DomainError(DunklProbeError, ValueError):
    """Parameter outside the domain of a function or operator."""


class SizeError(DomainError):
    """Rule or truncation size out of the supported range."""


class PreconditionError(DomainError):
    """Operation invoked on inputs that make the result meaningless."""


class RangeError(DunklProbeError, OverflowError):
    """Result not representable in double precision; use the log variant."""


class ConstructionError(DunklProbeError, RuntimeError):
    """A basis or table could not be constructed to the required accuracy."""


class AccuracyError(DunklProbeError, RuntimeError):
    """Numerical integration could not reach its accuracy target."""


class ConfigError(DunklProbeError, ValueError):
    """Invalid or unreadable configuration."""
