"""Unit tests for report.json, report.txt, summary.parquet and their schemas."""

import json
import tempfile
from pathlib import Path

import pytest

from thetabench.core.errors import CacheFormatError
from thetabench.core.logging import ResultLogger, compute_config_hash, write_manifest
from thetabench.core.types import FullRunConfig, SuiteResult, SuiteStatus
from thetabench.storage.report import (
    SUMMARY_COLUMNS,
    build_report,
    emit_report,
    load_summary,
    reemit_report,
    render_text,
    write_summary,
)
from thetabench.storage.schema import validate_report


def _result(suite: str, q: int, status: SuiteStatus, **kwargs) -> SuiteResult:
    defaults = {"identities": 1} if status != SuiteStatus.SKIPPED else {"missing": "Sp_4(3)"}
    defaults.update(kwargs)
    return SuiteResult(suite=suite, params={"q": q, "psi_twist": "1"}, status=status, **defaults)


@pytest.fixture
def results() -> list[SuiteResult]:
    return [
        _result("pan", 5, SuiteStatus.VERIFIED, identities=4, duration_ms=120),
        _result(
            "thm-spthetalift",
            3,
            SuiteStatus.VERIFIED,
            identities=2,
            notes={"eps0": -1},
            duration_ms=40,
        ),
        _result(
            "eq-triv",
            3,
            SuiteStatus.REFUTED,
            witnesses=[{"check": "average", "group": "Sp_2(3)", "difference": []}],
        ),
        _result("prop-howe", 3, SuiteStatus.SKIPPED),
    ]


@pytest.fixture
def config() -> dict:
    return FullRunConfig().model_dump(mode="json")


class TestBuildReport:
    """Tests for build_report and render_text."""

    def test_empty_report(self, config: dict) -> None:
        """An empty run still gives a valid report."""
        report = build_report([], config)
        assert report["results"] == []
        assert report["eps0"] == {}
        assert validate_report(report) == []
        assert "totals: no results" in render_text(report)

    def test_order(self, results, config) -> None:
        """Results are ordered by q, then registry order."""
        report = build_report(results, config)
        order = [(r["params"]["q"], r["suite"]) for r in report["results"]]
        assert order == [(3, "eq-triv"), (3, "prop-howe"), (3, "thm-spthetalift"), (5, "pan")]

    def test_eps0_and_twist(self, results, config) -> None:
        """The measured eps0 and psi twist are reported."""
        report = build_report(results, config)
        assert report["eps0"] == {"3": -1}
        assert report["psi_twist"] == "1"

    def test_timings_optional(self, results, config) -> None:
        """Durations appear only when asked for."""
        without = build_report(results, config)
        assert all("duration_ms" not in r for r in without["results"])
        with_timings = build_report(results, config, include_timings=True)
        assert with_timings["results"][-1]["duration_ms"] == 120

    def test_witnesses_embedded(self, results, config) -> None:
        """Refutations carry their witnesses in both formats."""
        report = build_report(results, config)
        refuted = report["results"][0]
        assert refuted["status"] == "refuted-at-small-q"
        assert refuted["witnesses"][0]["group"] == "Sp_2(3)"
        text = render_text(report)
        assert "witness:" in text
        assert "missing: Sp_4(3)" in text
        assert "eps0: q=3: -1" in text

    def test_validate_report_names_gaps(self) -> None:
        """Missing fields of nested results are named by index."""
        report = {"version": 1, "config": {}, "psi_twist": "1", "eps0": {}, "results": [{}]}
        missing = validate_report(report)
        assert "results[0].suite" in missing
        assert "results[0].status" in missing


class TestEmitReport:
    """Tests for the report files."""

    def test_files_written(self, results, config) -> None:
        """Both report files are written."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir)
            emit_report(out, results, config)
            doc = json.loads((out / "report.json").read_text())
            assert validate_report(doc) == []
            assert (out / "report.txt").read_text().startswith("theta-bench report v1")

    def test_deterministic(self, results, config) -> None:
        """The same results give byte-identical reports whatever their input order."""
        with tempfile.TemporaryDirectory() as tmpdir:
            a, b = Path(tmpdir) / "a", Path(tmpdir) / "b"
            emit_report(a, results, config)
            emit_report(b, list(reversed(results)), config)
            assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
            assert (a / "report.txt").read_bytes() == (b / "report.txt").read_bytes()

    def test_summary(self, results) -> None:
        """summary.parquet has one row per result."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir)
            write_summary(out, results)
            df = load_summary(out)
            assert list(df.columns) == SUMMARY_COLUMNS
            assert len(df) == 4
            assert set(df["status"]) == {"verified", "refuted-at-small-q", "skipped-unsupported"}

    def test_summary_empty(self) -> None:
        """No results, no summary file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            write_summary(Path(tmpdir), [])
            assert not (Path(tmpdir) / "summary.parquet").exists()


class TestReemitReport:
    """Tests for re-emitting reports from a run directory."""

    def _run_dir(self, root: Path, results, config) -> Path:
        run_dir = root / "run1"
        write_manifest(run_dir, "run1", config, compute_config_hash(config))
        logger = ResultLogger(run_dir, "run1")
        for r in results:
            logger.log_result(r)
        return run_dir

    def test_idempotent(self, results, config) -> None:
        """Re-emitting gives the same bytes as the first emission."""
        with tempfile.TemporaryDirectory() as tmpdir:
            run_dir = self._run_dir(Path(tmpdir), results, config)
            emit_report(run_dir, results, config)
            first = (run_dir / "report.json").read_bytes()
            reemit_report(run_dir)
            assert (run_dir / "report.json").read_bytes() == first
            reemit_report(run_dir)
            assert (run_dir / "report.json").read_bytes() == first
            assert (run_dir / "summary.parquet").exists()

    def test_other_output_dir(self, results, config) -> None:
        """Reports can go to another directory, with timings."""
        with tempfile.TemporaryDirectory() as tmpdir:
            run_dir = self._run_dir(Path(tmpdir), results, config)
            out = Path(tmpdir) / "elsewhere"
            doc = reemit_report(run_dir, out, include_timings=True)
            assert (out / "report.txt").exists()
            assert all("duration_ms" in r for r in doc["results"])

    def test_missing_artifacts(self) -> None:
        """A directory without results is refused."""
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(CacheFormatError):
                reemit_report(Path(tmpdir))

    def test_incomplete_record(self, results, config) -> None:
        """A record without required fields is refused."""
        with tempfile.TemporaryDirectory() as tmpdir:
            run_dir = self._run_dir(Path(tmpdir), results, config)
            with open(run_dir / "results.jsonl", "a") as f:
                f.write(json.dumps({"suite": "pan"}) + "\n")
            with pytest.raises(CacheFormatError):
                reemit_report(run_dir)
