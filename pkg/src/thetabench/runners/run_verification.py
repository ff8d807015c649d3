"""Verification runner: runs the selected suites at every q, writes artifacts."""

from __future__ import annotations

import time
from pathlib import Path

from thetabench.core.logging import ResultLogger, compute_config_hash, write_manifest
from thetabench.core.types import FullRunConfig, SuiteResult
from thetabench.runners.checks import SKIP_ERRORS, Tally
from thetabench.runners.context import SuiteContext
from thetabench.runners.registry import get_suite, select_suites
from thetabench.storage.cache import TableCache, resolve_cache_dir
from thetabench.storage.report import emit_report, write_summary


def run_suite(suite_id: str, ctx: SuiteContext) -> SuiteResult:
    """Run one suite at the context's q.

    A prerequisite beyond budget turns the suite (or the part of it that needed
    it) into a skip naming the prerequisite. NonIntegerMultiplicity and any other
    error propagate and abort the run.
    """
    spec = get_suite(suite_id)
    tally = Tally()
    tally.params = {"q": ctx.q, "psi_twist": ctx.psi_twist}
    start = time.perf_counter()
    try:
        spec.run(ctx, tally)
    except SKIP_ERRORS as e:
        # checks done before the failure still count
        print(f"  skipping the rest of {suite_id}: {e}")
        tally.skip(str(e))
    duration_ms = int((time.perf_counter() - start) * 1000)
    return tally.result(suite_id, duration_ms)


def run_verification(config: FullRunConfig, cache_dir: Path | None = None) -> Path:
    """Run the selected suites for every q of the config.

    Args:
        config: Full verification configuration.
        cache_dir: Cache root; defaults to the config, then THETABENCH_CACHE_DIR.

    Returns:
        Path to the output directory.
    """
    output_dir = Path(config.run.output_dir) / config.run.run_id
    output_dir.mkdir(parents=True, exist_ok=True)
    results_path = output_dir / "results.jsonl"
    if results_path.exists():
        results_path.unlink()

    config_dict = config.model_dump(mode="json")
    config_hash = compute_config_hash(config_dict)
    write_manifest(output_dir, config.run.run_id, config_dict, config_hash)

    logger = ResultLogger(output_dir, config.run.run_id)
    cache = TableCache(resolve_cache_dir(cache_dir or config.run.cache_dir))
    suites = select_suites(config.suites)

    results: list[SuiteResult] = []
    for q in config.run.q_values:
        ctx = SuiteContext(
            q,
            config.run.psi_twist,
            budgets=config.budgets,
            seed=config.run.seed,
            cache=cache,
        )
        for spec in suites:
            print(f"Running suite: {spec.id} (q={q})")
            result = run_suite(spec.id, ctx)
            print(f"  {result.status}: {result.identities} identities, "
                  f"{len(result.witnesses)} witnesses")
            logger.log_result(result)
            results.append(result)

    emit_report(output_dir, results, config_dict, include_timings=config.run.include_timings)
    write_summary(output_dir, results)

    print(f"Verification complete. Output: {output_dir}")
    return output_dir
