"""End-to-end smoke tests for the thetabench CLI."""

import subprocess
import sys
import tempfile
from pathlib import Path

import pytest


@pytest.fixture
def project_root() -> Path:
    """Get the project root directory."""
    return Path(__file__).parent.parent.parent


def _cli(project_root: Path, *args: str) -> subprocess.CompletedProcess[str]:
    return subprocess.run(
        [sys.executable, "-m", "thetabench.cli", *args],
        capture_output=True,
        text=True,
        cwd=project_root,
    )


class TestCLISmoke:
    """Smoke tests for CLI commands."""

    def test_cli_help(self, project_root: Path) -> None:
        """Test that CLI help works."""
        result = _cli(project_root, "--help")
        assert result.returncode == 0
        assert "verify" in result.stdout
        assert "report" in result.stdout

    def test_suites_lists_registry(self, project_root: Path) -> None:
        """Test that the suites command lists every suite id."""
        result = _cli(project_root, "suites")
        assert result.returncode == 0
        assert "eq-triv" in result.stdout
        assert "thm-spthetalift" in result.stdout

    def test_table_sp2(self, project_root: Path) -> None:
        """Test that the character table of Sp_2(3) is built and written."""
        with tempfile.TemporaryDirectory() as tmpdir:
            result = _cli(
                project_root, "table", "Sp", "--rank", "1", "--q", "3",
                "--cache-dir", tmpdir, "--out", tmpdir,
            )
            assert result.returncode == 0, result.stderr
            assert "sum of squares: 24" in result.stdout
            assert (Path(tmpdir) / "sp-1-q3.json").exists()

    def test_table_unknown_family(self, project_root: Path) -> None:
        """Test that an unknown family is an error."""
        with tempfile.TemporaryDirectory() as tmpdir:
            result = _cli(project_root, "table", "Xx", "--out", tmpdir)
            assert result.returncode == 1
            assert "Error:" in result.stderr

    def test_theta_sp2_o1(self, project_root: Path) -> None:
        """Test that omega on Sp_2 x O_1 has dimension q."""
        with tempfile.TemporaryDirectory() as tmpdir:
            result = _cli(
                project_root, "theta", "--n", "1", "--np", "0", "--eps", "1",
                "--cache-dir", tmpdir, "--out", tmpdir,
            )
            assert result.returncode == 0, result.stderr
            assert "dimension 3 = 3" in result.stdout

    def test_weil_sp2(self, project_root: Path) -> None:
        """Test that the kernel model check passes on Sp_2(3)."""
        with tempfile.TemporaryDirectory() as tmpdir:
            result = _cli(
                project_root, "weil", "--n", "1", "--samples", "10",
                "--cache-dir", tmpdir, "--out", tmpdir,
            )
            assert result.returncode == 0, result.stderr
            assert "verified" in result.stdout

    def test_verify_and_report(self, project_root: Path) -> None:
        """Test a one-suite run and re-emitting its report."""
        with tempfile.TemporaryDirectory() as tmpdir:
            result = _cli(
                project_root, "verify", "--suite", "eq-triv", "--q", "3",
                "--out", tmpdir, "--cache-dir", str(Path(tmpdir) / "cache"),
            )
            assert result.returncode == 0, result.stderr
            run_dir = Path(tmpdir) / "verify"
            report_txt = run_dir / "report.txt"
            assert report_txt.exists()
            first = report_txt.read_bytes()

            result = _cli(project_root, "report", str(run_dir))
            assert result.returncode == 0, result.stderr
            assert "results: 1" in result.stdout
            assert report_txt.read_bytes() == first

            result = _cli(
                project_root, "report", str(run_dir), "--q", "5", "--psi-twist", "nonsquare",
                "--cache-dir", tmpdir,
            )
            assert result.returncode == 0, result.stderr
            assert "--q, --psi-twist, --cache-dir ignored" in result.stderr
            assert report_txt.read_bytes() == first

    def test_verify_unknown_suite(self, project_root: Path) -> None:
        """Test that an unknown suite id fails with an error message."""
        with tempfile.TemporaryDirectory() as tmpdir:
            result = _cli(project_root, "verify", "--suite", "nope", "--out", tmpdir)
            assert result.returncode == 1
            assert "Error:" in result.stderr

    def test_verify_missing_config(self, project_root: Path) -> None:
        """Test that verify fails on a missing config file."""
        result = _cli(project_root, "verify", "nonexistent.yaml")
        assert result.returncode == 1
        assert "not found" in result.stderr

    def test_report_missing_dir(self, project_root: Path) -> None:
        """Test that report fails on a missing run directory."""
        result = _cli(project_root, "report", "no/such/run")
        assert result.returncode == 1
        assert "not found" in result.stderr
