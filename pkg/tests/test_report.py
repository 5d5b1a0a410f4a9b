"""
Tests for run reports.
"""

import json
import math

import pytest

from dunkl_probe.report import (
    SCHEMA_VERSION,
    STATUS_ERROR,
    STATUS_FAILED,
    STATUS_PASSED,
    STATUS_SKIPPED,
    CheckRecord,
    ProbeReport,
    SuiteResult,
)


def test_residual_pass_and_fail():
    """Test residual records compare |value| to the tolerance."""
    assert CheckRecord.residual("a", "x = y", 1e-12, 1e-10).passed is True
    assert CheckRecord.residual("a", "x = y", -1e-12, 1e-10).passed is True
    assert CheckRecord.residual("a", "x = y", 1e-9, 1e-10).passed is False
    assert CheckRecord.residual("a", "exact", 0, 0.0).passed is True


def test_residual_nan_never_passes():
    """Test NaN residuals fail regardless of tolerance."""
    record = CheckRecord.residual("a", "x = y", math.nan, math.inf)
    assert record.passed is False


def test_residual_details():
    """Test extra keyword arguments land in details."""
    record = CheckRecord.residual("a", "x = y", 0.5, 1.0, degree=4, t=0.3)
    assert record.details == {"degree": 4, "t": 0.3}
    assert isinstance(record.value, float)


def test_observation_always_passes():
    """Test observations carry no tolerance."""
    record = CheckRecord.observation("defect", "‖R - R*‖", 3.5)
    assert record.tolerance is None
    assert record.passed is True


def test_suite_result_from_records():
    """Test suite status follows its records."""
    ok = SuiteResult.from_records("s", [CheckRecord.residual("a", "", 0.0, 1.0)])
    bad = SuiteResult.from_records(
        "s",
        [CheckRecord.residual("a", "", 0.0, 1.0), CheckRecord.residual("b", "", 2.0, 1.0)],
    )

    assert ok.status == STATUS_PASSED and ok.ok
    assert bad.status == STATUS_FAILED and not bad.ok
    assert [r.name for r in bad.failed_records] == ["b"]


def test_skipped_suite_is_ok():
    """Test skipped suites do not fail a report."""
    report = ProbeReport("verify", {}, 0, "0.1.0")
    report.suites.append(SuiteResult("prop33", STATUS_SKIPPED, error_message="Needs d = 2"))
    assert report.passed is True

    report.suites.append(SuiteResult("norm", STATUS_ERROR, error_message="boom"))
    assert report.passed is False


def test_report_round_trip(tmp_path):
    """Test save and load preserve every field."""
    records = [
        CheckRecord.residual("commutativity", "T_i T_j = T_j T_i", 0, 0.0, degree=8),
        CheckRecord.observation("adjoint_defect", "‖R - R*‖", 0.25),
    ]
    report = ProbeReport(
        command="verify",
        config={"seed": 3, "group": {"kappa": ["1/2"]}},
        seed=3,
        library_version="0.1.0",
        suites=[SuiteResult.from_records("dunkl", records, elapsed_sec=1.5)],
        timing={"total_sec": 1.5},
        summary={"passed": True},
    )
    path = tmp_path / "nested" / "report.json"
    report.save(str(path))

    loaded = ProbeReport.load(str(path))
    assert loaded == report
    assert loaded.suite("dunkl").records[0].details == {"degree": 8}


def test_report_json_layout(tmp_path):
    """Test the JSON carries the schema version and suite list."""
    report = ProbeReport("verify", {}, 1, "0.1.0")
    path = tmp_path / "report.json"
    report.save(str(path))

    data = json.loads(path.read_text())
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["suites"] == []


def test_schema_mismatch():
    """Test reports of another schema version are refused."""
    data = ProbeReport("verify", {}, 1, "0.1.0").to_dict()
    data["schema_version"] = SCHEMA_VERSION + 1
    with pytest.raises(ValueError, match="schema version"):
        ProbeReport.from_dict(data)


def test_missing_suite():
    """Test lookup of an absent suite raises KeyError."""
    report = ProbeReport("verify", {}, 1, "0.1.0")
    with pytest.raises(KeyError):
        report.suite("hermite")


def test_nan_values_written_as_null(tmp_path):
    """Test non-finite values are stored as null and read back as NaN."""
    path = tmp_path / "report.json"
    records = [
        CheckRecord.observation("unresolved", "profile below noise", math.nan, ratio=math.inf),
        CheckRecord.residual("ok", "x = y", 0.0, 1e-10),
    ]
    report = ProbeReport("verify", {}, 1, "0.1.0", suites=[SuiteResult.from_records("s", records)])
    report.save(str(path))

    text = path.read_text()
    assert "NaN" not in text and "Infinity" not in text
    data = json.loads(text)
    assert data["suites"][0]["records"][0]["value"] is None
    assert data["suites"][0]["records"][0]["details"]["ratio"] is None

    loaded = ProbeReport.load(str(path))
    assert math.isnan(loaded.suites[0].records[0].value)
    assert loaded.suites[0].records[1].value == 0.0
