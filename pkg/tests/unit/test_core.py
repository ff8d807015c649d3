"""Unit tests for configuration models, result logging, the RNG and suite bookkeeping."""

import json
import tempfile
from pathlib import Path

import pytest
from pydantic import ValidationError

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.core.errors import BudgetExceeded, UnsupportedScale
from thetabench.core.logging import (
    ResultLogger,
    compute_config_hash,
    load_manifest,
    load_results_jsonl,
    write_manifest,
)
from thetabench.core.rng import SeededRNG
from thetabench.core.types import (
    BudgetConfig,
    FullRunConfig,
    RunConfig,
    SuiteResult,
    SuiteStatus,
    check_field_order,
    load_run_config,
)
from thetabench.runners.checks import Tally, optional
from thetabench.storage.schema import validate_manifest, validate_result_record


class TestConfig:
    """Tests for the configuration models."""

    def test_defaults(self) -> None:
        """Test default config values."""
        config = FullRunConfig()
        assert config.run.q_values == [3]
        assert config.run.psi_twist == "1"
        assert config.budgets.tower_level_bound == 4
        assert config.suites.include == []

    def test_field_orders(self) -> None:
        """Odd prime powers with p in {3, 5, 7} and k <= 2."""
        for q in (3, 5, 7, 9, 25, 49):
            assert check_field_order(q) == q
        for q in (2, 4, 6, 11, 27):
            with pytest.raises(ValueError):
                check_field_order(q)

    def test_run_config_rejects_bad_q(self) -> None:
        """Test that q_values are validated."""
        with pytest.raises(ValidationError):
            RunConfig(q_values=[3, 4])
        with pytest.raises(ValidationError):
            RunConfig(q_values=[])

    def test_psi_twist_values(self) -> None:
        """Only the two additive characters are accepted."""
        assert RunConfig(psi_twist="nonsquare").psi_twist == "nonsquare"
        with pytest.raises(ValidationError):
            RunConfig(psi_twist="2")

    def test_budgets_positive(self) -> None:
        """Budgets must be positive."""
        with pytest.raises(ValidationError):
            BudgetConfig(max_group_order=0)

    def test_load_yaml(self) -> None:
        """Test loading a YAML config."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "config.yaml"
            path.write_text(
                "run:\n  run_id: t\n  q_values: [3, 5]\n"
                "budgets:\n  tower_level_bound: 2\n"
                "suites:\n  include: [pan]\n"
            )
            config = load_run_config(path)
            assert config.run.q_values == [3, 5]
            assert config.budgets.tower_level_bound == 2
            assert config.suites.include == ["pan"]

    def test_shipped_configs(self) -> None:
        """The configs in configs/ validate."""
        root = Path(__file__).parents[2] / "configs"
        for name in ("verify.yaml", "smoke.yaml"):
            load_run_config(root / name)


class TestSuiteResult:
    """Tests for SuiteResult validation."""

    def test_refuted_needs_witness(self) -> None:
        """A refutation without a witness is invalid."""
        with pytest.raises(ValidationError):
            SuiteResult(suite="pan", status=SuiteStatus.REFUTED, identities=1)

    def test_verified_needs_identities(self) -> None:
        """A verification without identities is invalid."""
        with pytest.raises(ValidationError):
            SuiteResult(suite="pan", status=SuiteStatus.VERIFIED)

    def test_skipped_needs_missing(self) -> None:
        """A skip must name what is missing."""
        with pytest.raises(ValidationError):
            SuiteResult(suite="pan", status=SuiteStatus.SKIPPED)
        ok = SuiteResult(suite="pan", status=SuiteStatus.SKIPPED, missing="Sp_4(3) table")
        assert ok.status == "skipped-unsupported"


class TestTally:
    """Tests for Tally and optional."""

    def test_verified(self) -> None:
        """Passing checks give a verified result."""
        tally = Tally()
        tally.check(True, "a")
        tally.equal_values(Cyclotomic.zeta(4) ** 2, -1, "b")
        result = tally.result("eq-triv", 5)
        assert result.status == SuiteStatus.VERIFIED
        assert result.identities == 2
        assert result.duration_ms == 5

    def test_refuted(self) -> None:
        """A failing check is recorded with its exact values."""
        tally = Tally()
        tally.check(True, "a")
        tally.equal_values(Cyclotomic.zeta(3), 1, "b", group="Sp_2(3)")
        result = tally.result("eq-triv")
        assert result.status == SuiteStatus.REFUTED
        witness = result.witnesses[0]
        assert witness["check"] == "b"
        assert witness["group"] == "Sp_2(3)"
        assert witness["lhs"] == Cyclotomic.zeta(3).to_json()

    def test_skipped(self) -> None:
        """Nothing checked gives a skip naming the missing prerequisites."""
        tally = Tally()
        with optional(tally, "Sp_4 part"):
            raise BudgetExceeded("Sp_4(3)", 51840, 1000)
        result = tally.result("prop-howe")
        assert result.status == SuiteStatus.SKIPPED
        assert "Sp_4 part" in result.missing
        assert "51840" in result.missing

    def test_partial_skip_keeps_identities(self) -> None:
        """Checks done before a skipped part still count."""
        tally = Tally()
        tally.check(True, "a")
        with optional(tally, "elliptic torus"):
            raise UnsupportedScale("Green functions")
        result = tally.result("disjointness")
        assert result.status == SuiteStatus.VERIFIED
        assert result.notes["missing"] == ["elliptic torus: Green functions"]

    def test_optional_lets_other_errors_through(self) -> None:
        """Only budget errors are swallowed."""
        tally = Tally()
        with pytest.raises(ZeroDivisionError):
            with optional(tally, "x"):
                raise ZeroDivisionError


class TestLogging:
    """Tests for results.jsonl and the manifest."""

    def test_result_logger(self) -> None:
        """Logged records carry the run id and all required fields."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir)
            logger = ResultLogger(out, "run1")
            tally = Tally()
            tally.check(True, "a")
            tally.params = {"q": 3, "psi_twist": "1"}
            logger.log_result(tally.result("eq-triv", 12))
            records = load_results_jsonl(out / "results.jsonl")
            assert len(records) == 1
            assert records[0]["run_id"] == "run1"
            assert records[0]["status"] == "verified"
            assert validate_result_record(records[0]) == []

    def test_manifest(self) -> None:
        """The manifest holds the config snapshot and its hash."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir)
            config = FullRunConfig().model_dump(mode="json")
            write_manifest(out, "run1", config, compute_config_hash(config))
            manifest = load_manifest(out / "run_manifest.json")
            assert validate_manifest(manifest) == []
            assert manifest["config_snapshot"] == json.loads(json.dumps(config))

    def test_config_hash_stable(self) -> None:
        """The hash depends on content, not key order."""
        a = compute_config_hash({"x": 1, "y": [1, 2]})
        b = compute_config_hash({"y": [1, 2], "x": 1})
        assert a == b
        assert len(a) == 16
        assert a != compute_config_hash({"x": 2, "y": [1, 2]})


class TestSeededRNG:
    """Tests for SeededRNG."""

    def test_reproducible(self) -> None:
        """The same seed gives the same pairs."""
        assert SeededRNG(42).pairs(24, 10) == SeededRNG(42).pairs(24, 10)

    def test_fork_is_independent(self) -> None:
        """Forked streams differ from the parent."""
        rng = SeededRNG(42)
        assert rng.fork(1).pairs(1000, 5) != SeededRNG(42).pairs(1000, 5)

    def test_range(self) -> None:
        """Pairs stay in range."""
        for i, j in SeededRNG(1).pairs(7, 100):
            assert 0 <= i < 7
            assert 0 <= j < 7
