"""
dunkl-probe

Numerical verification of harmonic analysis identities for the Dunkl harmonic oscillator
on the reflection group ℤ₂^d.
"""

__version__ = "0.1.0"

from dunkl_probe.config import Config
from dunkl_probe.dunkl_core import MultiPoly, ReflectionGroupZ2d
from dunkl_probe.hermite_engine import SpectralCoeffs
from dunkl_probe.report import ProbeReport
from dunkl_probe.suites import SuiteRunner
from dunkl_probe.validation import ConfigValidator

__all__ = [
    "Config",
    "ConfigValidator",
    "MultiPoly",
    "ProbeReport",
    "ReflectionGroupZ2d",
    "SpectralCoeffs",
    "SuiteRunner",
]
