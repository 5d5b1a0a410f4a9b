"""
Machine-readable run reports.

A report echoes the resolved configuration and holds one SuiteResult per suite, each a
list of CheckRecords naming the identity it measures.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from dunkl_probe.utils import load_json, save_json

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

STATUS_PASSED = "passed"
STATUS_FAILED = "failed"
STATUS_ERROR = "error"
STATUS_TIMEOUT = "timeout"
STATUS_SKIPPED = "skipped"


@dataclass
class CheckRecord:
    """One measured quantity against its tolerance."""

    name: str
    anchor: str
    value: float
    tolerance: Optional[float]
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def residual(
        cls,
        name: str,
        anchor: str,
        value: float,
        tolerance: float,
        **details: Any,
    ) -> "CheckRecord":
        """Record that passes when |value| <= tolerance; NaN never passes."""
        value = float(value)
        passed = not math.isnan(value) and abs(value) <= tolerance
        return cls(name, anchor, value, tolerance, passed, dict(details))

    @classmethod
    def observation(cls, name: str, anchor: str, value: float, **details: Any) -> "CheckRecord":
        """Reported value without a pass/fail criterion."""
        return cls(name, anchor, float(value), None, True, dict(details))


@dataclass
class SuiteResult:
    """Outcome of one suite."""

    suite: str
    status: str
    records: List[CheckRecord] = field(default_factory=list)
    elapsed_sec: float = 0.0
    error_message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status in (STATUS_PASSED, STATUS_SKIPPED)

    @property
    def failed_records(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    @classmethod
    def from_records(
        cls, suite: str, records: List[CheckRecord], elapsed_sec: float = 0.0
    ) -> "SuiteResult":
        status = STATUS_PASSED if all(r.passed for r in records) else STATUS_FAILED
        return cls(suite, status, records, elapsed_sec)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SuiteResult":
        records = [
            CheckRecord(**{**r, "value": math.nan if r["value"] is None else r["value"]})
            for r in data.get("records", [])
        ]
        return cls(
            suite=data["suite"],
            status=data["status"],
            records=records,
            elapsed_sec=float(data.get("elapsed_sec", 0.0)),
            error_message=data.get("error_message"),
        )


@dataclass
class ProbeReport:
    """Top-level report of one CLI command."""

    command: str
    config: Dict[str, Any]
    seed: int
    library_version: str
    suites: List[SuiteResult] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(s.ok for s in self.suites)

    def suite(self, name: str) -> SuiteResult:
        for s in self.suites:
            if s.suite == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProbeReport":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"Unsupported report schema version {version}")
        return cls(
            command=data["command"],
            config=data["config"],
            seed=int(data["seed"]),
            library_version=data["library_version"],
            suites=[SuiteResult.from_dict(s) for s in data.get("suites", [])],
            timing={k: float(v) for k, v in data.get("timing", {}).items()},
            summary=data.get("summary", {}),
            schema_version=version,
        )

    def save(self, path: str) -> None:
        save_json(self.to_dict(), path)
        logger.info(f"Report written to {path}")

    @classmethod
    def load(cls, path: str) -> "ProbeReport":
        return cls.from_dict(load_json(path))
