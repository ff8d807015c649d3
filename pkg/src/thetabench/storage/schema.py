"""Schema definitions for results.jsonl, run_manifest.json and report.json."""

from __future__ import annotations

from typing import Any

REPORT_VERSION = 1

# Required fields in results.jsonl
RESULT_REQUIRED_FIELDS = [
    "run_id",
    "suite",
    "params",
    "status",
    "identities",
    "witnesses",
    "duration_ms",
]

# Optional fields in results.jsonl
RESULT_OPTIONAL_FIELDS = [
    "missing",
    "notes",
]

# Required fields in run_manifest.json
MANIFEST_REQUIRED_FIELDS = [
    "run_id",
    "config_hash",
    "config_snapshot",
    "code_version",
    "environment",
]

# Required fields in report.json, and in each of its results
REPORT_REQUIRED_FIELDS = [
    "version",
    "config",
    "psi_twist",
    "eps0",
    "results",
]

REPORT_RESULT_REQUIRED_FIELDS = [
    "suite",
    "params",
    "status",
    "identities",
    "witnesses",
]


def _missing(record: dict[str, Any], fields: list[str]) -> list[str]:
    return [field for field in fields if field not in record]


def validate_result_record(record: dict[str, Any]) -> list[str]:
    """Validate a results.jsonl record. Returns list of missing required fields."""
    return _missing(record, RESULT_REQUIRED_FIELDS)


def validate_manifest(manifest: dict[str, Any]) -> list[str]:
    """Validate a manifest. Returns list of missing required fields."""
    return _missing(manifest, MANIFEST_REQUIRED_FIELDS)


def validate_report(report: dict[str, Any]) -> list[str]:
    """Validate report.json. Missing fields of a result are named ``results[i].field``."""
    missing = _missing(report, REPORT_REQUIRED_FIELDS)
    for i, result in enumerate(report.get("results", [])):
        missing.extend(f"results[{i}].{f}" for f in _missing(result, REPORT_RESULT_REQUIRED_FIELDS))
    return missing
