"""CLI for ThetaBench using Typer."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Optional

import typer

from thetabench.core.logging import serialize
from thetabench.core.types import FullRunConfig, check_field_order, load_run_config
from thetabench.runners.checks import Tally
from thetabench.runners.context import SuiteContext
from thetabench.runners.registry import list_suites
from thetabench.runners.run_verification import run_verification
from thetabench.runners.suites.weil_suites import check_weil_model
from thetabench.storage.cache import TableCache, resolve_cache_dir
from thetabench.storage.report import reemit_report

app = typer.Typer(
    name="thetabench",
    help="Exact verification of theta correspondence identities over small finite fields",
    add_completion=False,
)

QOption = Annotated[int, typer.Option("--q", help="Field order (odd prime power)")]
PsiOption = Annotated[
    str, typer.Option("--psi-twist", help="Additive character: '1' or 'nonsquare'")
]
CacheOption = Annotated[
    Optional[Path],
    typer.Option("--cache-dir", help="Cache root (default: $THETABENCH_CACHE_DIR)"),
]
OutOption = Annotated[Path, typer.Option("--out", help="Output directory")]


def _context(q: int, psi_twist: str, cache_dir: Path | None) -> SuiteContext:
    check_field_order(q)
    cache = TableCache(resolve_cache_dir(cache_dir))
    return SuiteContext(q, psi_twist, cache=cache)


def _write_json(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True, default=serialize)
        f.write("\n")


@app.command()
def table(
    family: Annotated[str, typer.Argument(help="Sp, O or SO")],
    rank: Annotated[int, typer.Option("--rank", help="Sp_{2R} or O_{2R+1}")] = 1,
    eps: Annotated[int, typer.Option("--eps", help="Orthogonal sign, 1 or -1")] = 1,
    q: QOption = 3,
    psi_twist: PsiOption = "1",
    cache_dir: CacheOption = None,
    out: OutOption = Path("data/tables"),
) -> None:
    """Build a group and its character table; write the table JSON."""
    try:
        if eps not in (1, -1):
            raise ValueError(f"Unknown sign: {eps}")
        ctx = _context(q, psi_twist, cache_dir)
        if family == "Sp":
            group = ctx.sp(rank)
        elif family == "O":
            group = ctx.o(rank, eps)
        elif family == "SO":
            group = ctx.so(rank, eps)
        else:
            raise ValueError(f"Unknown family: {family}")

        characters = ctx.table(group)
        path = out / f"{family.lower()}{'' if family == 'Sp' else f'{eps:+d}'}-{rank}-q{q}.json"
        _write_json(path, characters.to_json())

        typer.echo(f"{group.name}: order {group.order}, {group.num_classes} classes")
        typer.echo(f"  degrees: {characters.degrees}")
        typer.echo(f"  sum of squares: {sum(d * d for d in characters.degrees)}")
        typer.echo(f"Character table written: {path}")

    except Exception as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(1)


@app.command()
def weil(
    n: Annotated[int, typer.Option("--n", help="Check omega on Sp_{2N}")] = 1,
    samples: Annotated[int, typer.Option("--samples", help="Random pairs")] = 200,
    q: QOption = 3,
    psi_twist: PsiOption = "1",
    cache_dir: CacheOption = None,
    out: OutOption = Path("data/weil"),
) -> None:
    """Check the kernel model of omega against the dense oracle and on random products."""
    try:
        ctx = _context(q, psi_twist, cache_dir)
        tally = Tally()
        check_weil_model(ctx, n, samples, tally)
        result = tally.result("weil-model")
        result.params = {"q": q, "psi_twist": psi_twist, "n": n, "samples": samples}

        path = out / f"weil-sp{2 * n}-q{q}.json"
        _write_json(path, result.model_dump(mode="json"))
        typer.echo(f"omega on Sp_{2 * n}({q}): {result.status}")
        typer.echo(f"  identities: {result.identities}")
        typer.echo(f"  witnesses: {len(result.witnesses)}")
        typer.echo(f"Result written: {path}")

    except Exception as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(1)


@app.command()
def theta(
    n: Annotated[int, typer.Option("--n", help="Sp_{2N}")] = 1,
    n_prime: Annotated[int, typer.Option("--np", help="O_{2N'+1}")] = 0,
    eps: Annotated[int, typer.Option("--eps", help="Orthogonal sign, 1 or -1")] = 1,
    q: QOption = 3,
    psi_twist: PsiOption = "1",
    cache_dir: CacheOption = None,
    out: OutOption = Path("data/theta"),
) -> None:
    """Decompose omega on (Sp_{2N}, O^eps_{2N'+1}) and write the multiplicity matrix."""
    try:
        if eps not in (1, -1):
            raise ValueError(f"Unknown sign: {eps}")
        ctx = _context(q, psi_twist, cache_dir)
        mm = ctx.decomposition(n, n_prime, eps)
        mm.check_bookkeeping()

        path = out / f"theta-sp{2 * n}-o{eps:+d}-{2 * n_prime + 1}-q{q}-psi{psi_twist}.json"
        _write_json(path, mm.to_json())
        typer.echo(f"{mm.label()}: dimension {mm.total_dimension()} = {mm.expected_dimension}")
        for i, j, m in mm.nonzero():
            typer.echo(f"  {mm.left[i].label} x {mm.right[j].label}: {m}")
        typer.echo(f"Multiplicity matrix written: {path}")

    except Exception as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(1)


@app.command()
def verify(
    config_path: Annotated[
        Optional[Path], typer.Argument(help="Path to verification config YAML")
    ] = None,
    suite: Annotated[
        Optional[list[str]], typer.Option("--suite", "-s", help="Suite id (repeatable)")
    ] = None,
    q: Annotated[
        Optional[list[int]], typer.Option("--q", help="Field order (repeatable)")
    ] = None,
    psi_twist: Annotated[
        Optional[str], typer.Option("--psi-twist", help="Additive character: '1' or 'nonsquare'")
    ] = None,
    cache_dir: CacheOption = None,
    out: Annotated[Optional[Path], typer.Option("--out", help="Output directory")] = None,
) -> None:
    """Run the verification suites and emit reports."""
    if config_path is not None and not config_path.exists():
        typer.echo(f"Error: Config file not found: {config_path}", err=True)
        raise typer.Exit(1)

    try:
        config = load_run_config(config_path) if config_path else FullRunConfig()
        run = config.run.model_dump()
        if q:
            run["q_values"] = q
        if psi_twist is not None:
            run["psi_twist"] = psi_twist
        if out is not None:
            run["output_dir"] = str(out)
        if cache_dir is not None:
            run["cache_dir"] = str(cache_dir)
        selection = config.suites.model_dump()
        if suite:
            selection["include"] = suite
        config = FullRunConfig(run=run, budgets=config.budgets, suites=selection)

        output_dir = run_verification(config)
        typer.echo(f"Report: {output_dir / 'report.txt'}")

    except Exception as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(1)


@app.command()
def report(
    run_dir: Annotated[Path, typer.Argument(help="Path to run output directory")],
    out: Annotated[
        Optional[Path], typer.Option("--out", help="Output directory (default: RUN_DIR)")
    ] = None,
    timings: Annotated[
        Optional[bool], typer.Option("--timings/--no-timings", help="Include durations")
    ] = None,
    q: Annotated[Optional[int], typer.Option("--q", help="Ignored: read from the run")] = None,
    psi_twist: Annotated[
        Optional[str], typer.Option("--psi-twist", help="Ignored: read from the run")
    ] = None,
    cache_dir: Annotated[
        Optional[Path], typer.Option("--cache-dir", help="Ignored: nothing is computed")
    ] = None,
) -> None:
    """Re-emit report.json and report.txt from results.jsonl (idempotent).

    The shared --q, --psi-twist and --cache-dir options are accepted so every
    subcommand takes them, but a report only depends on the run directory.
    """
    if not run_dir.exists():
        typer.echo(f"Error: Run directory not found: {run_dir}", err=True)
        raise typer.Exit(1)

    ignored = [
        name
        for name, value in (("--q", q), ("--psi-twist", psi_twist), ("--cache-dir", cache_dir))
        if value is not None
    ]
    if ignored:
        typer.echo(f"Note: {', '.join(ignored)} ignored; parameters come from {run_dir}", err=True)

    results_path = run_dir / "results.jsonl"
    if not results_path.exists():
        typer.echo(f"Error: results.jsonl not found in: {run_dir}", err=True)
        raise typer.Exit(1)

    try:
        doc = reemit_report(run_dir, out, include_timings=timings)
        typer.echo(f"Report re-emitted: {(out or run_dir) / 'report.json'}")
        typer.echo(f"  results: {len(doc['results'])}")

    except Exception as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(1)


@app.command()
def suites() -> None:
    """List registered suite ids."""
    for spec in list_suites():
        typer.echo(f"{spec.id:<28}{spec.description}")


if __name__ == "__main__":
    app()
