"""Integration tests for running suites and writing run artifacts."""

import json
import tempfile
from pathlib import Path

import pytest

from thetabench.core.errors import UnknownSuite
from thetabench.core.logging import load_manifest, load_results_jsonl
from thetabench.core.types import (
    BudgetConfig,
    FullRunConfig,
    RunConfig,
    SuiteSelection,
    SuiteStatus,
    load_run_config,
)
from thetabench.runners.context import SuiteContext
from thetabench.runners.run_verification import run_suite, run_verification
from thetabench.runners.suites.identify import epsilon_zero, theta_chain
from thetabench.storage.report import load_summary, reemit_report
from thetabench.storage.schema import (
    validate_manifest,
    validate_report,
    validate_result_record,
)

SMALL_BUDGETS = BudgetConfig(
    max_group_order=1000, dense_oracle_dim=100, tower_level_bound=2, weil_random_pairs=20
)


def _config(tmpdir: str, include: list[str], **run) -> FullRunConfig:
    return FullRunConfig(
        run=RunConfig(
            run_id="it",
            output_dir=str(Path(tmpdir) / "runs"),
            cache_dir=str(Path(tmpdir) / "cache"),
            **run,
        ),
        budgets=SMALL_BUDGETS,
        suites=SuiteSelection(include=include),
    )


class TestRunSuite:
    """Tests for run_suite at q = 3."""

    def test_eq_triv_verified(self) -> None:
        """The W-average of R_{T_w,1} is trivial on Sp_2 and both SO_3."""
        result = run_suite("eq-triv", SuiteContext(3, budgets=SMALL_BUDGETS))
        assert result.status == SuiteStatus.VERIFIED
        assert result.identities == 3
        assert result.params == {"q": 3, "psi_twist": "1"}

    def test_combinatorics_partial(self) -> None:
        """Out-of-budget parts are named while the rest is verified."""
        result = run_suite("combinatorics", SuiteContext(3, budgets=SMALL_BUDGETS))
        assert result.status == SuiteStatus.VERIFIED
        missing = result.notes["missing"]
        assert any("Sp_4" in m for m in missing)
        assert any("SO_5" in m for m in missing)

    def test_tiny_budget_skips(self) -> None:
        """A suite whose first group is over budget is skipped, naming the group."""
        ctx = SuiteContext(3, budgets=BudgetConfig(max_group_order=10))
        result = run_suite("eq-triv", ctx)
        assert result.status == SuiteStatus.SKIPPED
        assert "Sp_2(3)" in result.missing

    def test_weil_model_both_twists(self) -> None:
        """The kernel model holds for both additive characters."""
        for twist in ("1", "nonsquare"):
            result = run_suite("weil-model", SuiteContext(3, twist, budgets=SMALL_BUDGETS))
            assert result.status == SuiteStatus.VERIFIED, result.witnesses[:1]

    @pytest.mark.parametrize("q", [3, 5])
    @pytest.mark.parametrize("twist", ["1", "nonsquare"])
    def test_mvw_jacquet_verified(self, q: int, twist: str) -> None:
        """The Jacquet module of omega matches the fixed MVW decomposition for both signs."""
        result = run_suite("mvw-jacquet", SuiteContext(q, twist, budgets=SMALL_BUDGETS))
        assert result.status == SuiteStatus.VERIFIED, result.witnesses[:1]
        assert result.identities == 2
        assert result.witnesses == []

    def test_unknown_suite(self) -> None:
        """Test that an unknown id is rejected."""
        with pytest.raises(UnknownSuite):
            run_suite("no-such-suite", SuiteContext(3))


class TestThetaChain:
    """Tests for the alpha/beta labels of the cuspidal theta-representations of Sp_2."""

    def test_alpha_occurs_first_in_eps0_tower(self) -> None:
        """alpha is at level 0 of the eps0 tower and beta of the other, for both twists."""
        for twist in ("1", "nonsquare"):
            ctx = SuiteContext(3, twist, budgets=SMALL_BUDGETS)
            chain = theta_chain(ctx, with_level2=False)
            assert chain is not None and chain.eps0 is not None
            assert epsilon_zero(ctx, chain.alpha) == chain.eps0
            assert epsilon_zero(ctx, chain.beta) == -chain.eps0

    def test_twist_swaps_towers_not_labels(self) -> None:
        """A nonsquare twist keeps alpha and beta and flips eps0."""
        plain = theta_chain(SuiteContext(3, budgets=SMALL_BUDGETS), with_level2=False)
        twisted = theta_chain(
            SuiteContext(3, "nonsquare", budgets=SMALL_BUDGETS), with_level2=False
        )
        assert (twisted.alpha, twisted.beta) == (plain.alpha, plain.beta)
        assert twisted.eps0 == -plain.eps0


class TestRunVerification:
    """Tests for run_verification and its artifacts."""

    def test_artifacts(self) -> None:
        """A run writes a manifest, results, both reports and the summary."""
        with tempfile.TemporaryDirectory() as tmpdir:
            config = _config(tmpdir, ["eq-triv", "combinatorics"])
            out = run_verification(config)
            assert out == Path(tmpdir) / "runs" / "it"

            manifest = load_manifest(out / "run_manifest.json")
            assert validate_manifest(manifest) == []
            assert manifest["config_snapshot"]["suites"]["include"] == ["eq-triv", "combinatorics"]

            records = load_results_jsonl(out / "results.jsonl")
            assert [r["suite"] for r in records] == ["eq-triv", "combinatorics"]
            for record in records:
                assert validate_result_record(record) == []

            report = json.loads((out / "report.json").read_text())
            assert validate_report(report) == []
            assert all("duration_ms" not in r for r in report["results"])
            assert (out / "report.txt").exists()
            assert len(load_summary(out)) == 2
            assert any((Path(tmpdir) / "cache" / "groups").iterdir())

    def test_reports_reproducible(self) -> None:
        """Two runs of the same config give byte-identical reports; the second uses the cache."""
        with tempfile.TemporaryDirectory() as tmpdir:
            config = _config(tmpdir, ["eq-triv"])
            out = run_verification(config)
            first = (out / "report.json").read_bytes()
            first_txt = (out / "report.txt").read_bytes()
            run_verification(config)
            assert (out / "report.json").read_bytes() == first
            assert (out / "report.txt").read_bytes() == first_txt
            assert len(load_results_jsonl(out / "results.jsonl")) == 1

    def test_reemit_matches_run(self) -> None:
        """Re-emitting from results.jsonl reproduces the run's report."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = run_verification(_config(tmpdir, ["eq-triv"]))
            first = (out / "report.json").read_bytes()
            reemit_report(out)
            assert (out / "report.json").read_bytes() == first

    def test_multiple_q(self) -> None:
        """Every q gets its own result."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = run_verification(_config(tmpdir, ["eq-triv"], q_values=[3, 5]))
            report = json.loads((out / "report.json").read_text())
            assert [r["params"]["q"] for r in report["results"]] == [3, 5]

    def test_timings(self) -> None:
        """include_timings adds durations to the report."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = run_verification(_config(tmpdir, ["eq-triv"], include_timings=True))
            report = json.loads((out / "report.json").read_text())
            assert "duration_ms" in report["results"][0]


@pytest.mark.slow
class TestSmokeConfig:
    """The shipped smoke configuration (needs the Sp_4(3) and O_5(3) tables)."""

    def test_smoke_has_no_refutations(self) -> None:
        """No suite of the smoke run is refuted at q = 3."""
        config = load_run_config(Path(__file__).parents[2] / "configs" / "smoke.yaml")
        with tempfile.TemporaryDirectory() as tmpdir:
            run = config.run.model_copy(
                update={"output_dir": str(Path(tmpdir) / "runs"), "cache_dir": str(Path(tmpdir))}
            )
            out = run_verification(config.model_copy(update={"run": run}))
            report = json.loads((out / "report.json").read_text())
            refuted = [r["suite"] for r in report["results"] if r["status"] == "refuted-at-small-q"]
            assert refuted == []


@pytest.mark.slow
class TestCuspidalUnipotentSp4:
    """The degree-based pick of the Sp_4 cuspidal unipotent (needs Sp_4(3) and O_5(3))."""

    def test_pick_agrees_with_theta_chain(self) -> None:
        """The pick is the only candidate paired with chi lambda'_1 in either tower."""
        result = run_suite("thm-3.7", SuiteContext(3))
        assert result.status == SuiteStatus.VERIFIED, result.witnesses[:1]
        picks = result.notes["sp4_pick_vs_chain"]
        assert set(picks) == {"1", "-1"}
        assert all(p["agree"] for p in picks.values())
        assert all(p["degree_pick"] in p["chain_partners"] for p in picks.values())
