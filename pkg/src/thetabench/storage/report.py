"""Reports: report.json, report.txt and summary.parquet from suite results.

Both reports are deterministic. Results are ordered by q, then by registry
order, and wall-clock durations appear only when timings are requested.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from thetabench.core.errors import CacheFormatError
from thetabench.core.logging import load_manifest, load_results_jsonl, serialize
from thetabench.core.types import SuiteResult
from thetabench.runners.registry import SUITE_REGISTRY
from thetabench.storage.schema import REPORT_VERSION, validate_manifest, validate_result_record

SUMMARY_COLUMNS = ["suite", "q", "psi_twist", "status", "identities", "witnesses"]


def _as_record(result: SuiteResult | dict[str, Any]) -> dict[str, Any]:
    if isinstance(result, SuiteResult):
        return result.model_dump(mode="json")
    return dict(result)


def _order_key(record: dict[str, Any]) -> tuple[int, int, str]:
    order = list(SUITE_REGISTRY)
    suite = record["suite"]
    position = order.index(suite) if suite in order else len(order)
    return int(record.get("params", {}).get("q", 0)), position, suite


def build_report(
    results: list[SuiteResult | dict[str, Any]],
    config: dict[str, Any] | None = None,
    include_timings: bool = False,
) -> dict[str, Any]:
    """The report document: version, config, psi twist, measured eps0 per q, results."""
    config = config or {}
    records = sorted((_as_record(r) for r in results), key=_order_key)
    entries = []
    eps0: dict[str, Any] = {}
    for record in records:
        entry = {
            "suite": record["suite"],
            "params": record.get("params", {}),
            "status": record["status"],
            "identities": record.get("identities", 0),
            "witnesses": record.get("witnesses", []),
            "missing": record.get("missing"),
            "notes": record.get("notes", {}),
        }
        if include_timings:
            entry["duration_ms"] = record.get("duration_ms", 0)
        entries.append(entry)
        if "eps0" in entry["notes"]:
            eps0[str(entry["params"].get("q"))] = entry["notes"]["eps0"]
    return {
        "version": REPORT_VERSION,
        "config": config,
        "psi_twist": config.get("run", {}).get("psi_twist"),
        "eps0": eps0,
        "results": entries,
    }


def render_text(report: dict[str, Any]) -> str:
    """Plain-text table of a report document."""
    timings = any("duration_ms" in r for r in report["results"])
    header = f"{'suite':<28}{'q':>4}  {'status':<22}{'identities':>11}{'witnesses':>11}"
    if timings:
        header += f"{'ms':>10}"
    lines = [
        f"theta-bench report v{report['version']}",
        f"psi twist: {report['psi_twist']}",
        "eps0: "
        + (", ".join(f"q={q}: {e:+d}" for q, e in report["eps0"].items() if e is not None)
           or "not measured"),
        "",
        header,
        "-" * len(header),
    ]
    for r in report["results"]:
        line = (
            f"{r['suite']:<28}{r['params'].get('q', ''):>4}  {r['status']:<22}"
            f"{r['identities']:>11}{len(r['witnesses']):>11}"
        )
        if timings:
            line += f"{r.get('duration_ms', 0):>10}"
        lines.append(line)
        if r.get("missing"):
            lines.append(f"    missing: {r['missing']}")
        for w in r["witnesses"][:3]:
            lines.append(f"    witness: {json.dumps(w, sort_keys=True, default=serialize)}")
        if len(r["witnesses"]) > 3:
            lines.append(f"    ... {len(r['witnesses']) - 3} more witnesses in report.json")
    counts: dict[str, int] = {}
    for r in report["results"]:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    lines.append("")
    lines.append(
        "totals: " + (", ".join(f"{k} {v}" for k, v in sorted(counts.items())) or "no results")
    )
    return "\n".join(lines) + "\n"


def emit_report(
    output_dir: Path,
    results: list[SuiteResult | dict[str, Any]],
    config: dict[str, Any] | None = None,
    include_timings: bool = False,
) -> dict[str, Any]:
    """Write report.json and report.txt into output_dir; return the report document."""
    report = build_report(results, config, include_timings)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        with open(output_dir / "report.json", "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2, sort_keys=True, default=serialize)
            f.write("\n")
        with open(output_dir / "report.txt", "w", encoding="utf-8") as f:
            f.write(render_text(report))
    except OSError as e:
        raise CacheFormatError(f"cannot write report to {output_dir}: {e}") from e
    return report


def write_summary(output_dir: Path, results: list[SuiteResult | dict[str, Any]]) -> None:
    """Write one row per result to summary.parquet."""
    if not results:
        return
    rows = []
    for record in sorted((_as_record(r) for r in results), key=_order_key):
        params = record.get("params", {})
        rows.append(
            {
                "suite": record["suite"],
                "q": int(params.get("q", 0)),
                "psi_twist": str(params.get("psi_twist", "")),
                "status": record["status"],
                "identities": int(record.get("identities", 0)),
                "witnesses": len(record.get("witnesses", [])),
            }
        )
    df = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    table = pa.Table.from_pandas(df, preserve_index=False)
    pq.write_table(table, output_dir / "summary.parquet")


def load_summary(output_dir: Path) -> pd.DataFrame:
    """Load summary.parquet."""
    return pd.read_parquet(output_dir / "summary.parquet")


def reemit_report(
    run_dir: Path, output_dir: Path | None = None, include_timings: bool | None = None
) -> dict[str, Any]:
    """Rebuild report.json, report.txt and summary.parquet from results.jsonl (idempotent).

    The manifest must be present and complete; its config snapshot becomes the
    report config. Files go to ``output_dir`` (default: the run directory).
    """
    manifest_path = run_dir / "run_manifest.json"
    results_path = run_dir / "results.jsonl"
    if not manifest_path.exists() or not results_path.exists():
        raise CacheFormatError(f"{run_dir} has no run_manifest.json or results.jsonl")
    try:
        manifest = load_manifest(manifest_path)
        records = load_results_jsonl(results_path)
    except (OSError, json.JSONDecodeError) as e:
        raise CacheFormatError(f"cannot read run artifacts in {run_dir}: {e}") from e
    missing = validate_manifest(manifest)
    if missing:
        raise CacheFormatError(f"manifest is missing fields: {', '.join(missing)}")
    for i, record in enumerate(records):
        missing = validate_result_record(record)
        if missing:
            raise CacheFormatError(f"results.jsonl line {i + 1} is missing {', '.join(missing)}")
    config = manifest["config_snapshot"]
    if include_timings is None:
        include_timings = bool(config.get("run", {}).get("include_timings", False))
    results = [{k: v for k, v in r.items() if k != "run_id"} for r in records]
    output_dir = output_dir or run_dir
    report = emit_report(output_dir, results, config, include_timings)
    write_summary(output_dir, results)
    return report
