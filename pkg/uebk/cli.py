import logging
from pathlib import Path
from typing import Optional

import typer  # type: ignore

from uebk import config
from uebk.constructions import Convention, Family, construct, enumerate_families
from uebk.mixed_state import (
    EmptyComplementError,
    InvalidStateError,
    certify_rho_perp,
    rho_perp,
)
from uebk.serialize import load_family, save_family, save_report, save_state
from uebk.sweep import run_sweep
from uebk.tensor import NotOrthonormalError
from uebk.verification import verify_family

LOG = config.get_logger()
app = typer.Typer()

EXIT_FAIL = 1
EXIT_PARAMS = 2


def _set_debug(debug: bool) -> None:
    if debug:
        LOG.setLevel(logging.DEBUG)


def _bad_input(err: Exception) -> typer.Exit:
    LOG.error(err)
    return typer.Exit(code=EXIT_PARAMS)


@app.command("construct")
def construct_cmd(
    family: Family = typer.Option(..., "--family", help="Which construction to build."),
    d: int = typer.Option(..., "--d", help="Levels of subsystem A."),
    dprime: int = typer.Option(..., "--dprime", help="Levels of subsystem B (d <= d')."),
    k: int = typer.Option(..., "--k", help="Schmidt number of every member."),
    q: Optional[int] = typer.Option(
        None, "--q", help="Shift parameter for prop2, prop4, prop5 and prop6."
    ),
    m: Optional[int] = typer.Option(
        None, "--m", help="Column modulus for eq8; see `enumerate` for admissible values."
    ),
    convention: Convention = typer.Option(
        Convention.REPAIRED,
        "--convention",
        "--prop2-convention",
        help="""Reading of the prop2 modulus and the prop4 range of q.
        `literal` follows the printed formulas, `repaired` the member counts.""",
    ),
    umeb: bool = typer.Option(
        False, "--umeb", help="Admit k = d (maximally entangled members) for prop1 and eq8."
    ),
    out: Path = typer.Option(..., "--out", help="Where to write the family document."),
    debug: bool = typer.Option(False, "--debug", hidden=True),
):
    """Build one family and write it to a JSON document."""
    _set_debug(debug)
    try:
        built = construct(family, d, dprime, k, q=q, m_offset=m,
                          convention=convention, umeb=umeb)
    except config.UebkError as err:
        raise _bad_input(err)
    save_family(built, out)
    typer.echo(f"{built.params.label}: {len(built)} members -> {out}")


@app.command("verify")
def verify_cmd(
    family_file: Path = typer.Argument(..., help="Family document written by `construct`."),
    tol_orth: float = typer.Option(config.TOL_ORTH, "--tol-orth"),
    tol_rank: float = typer.Option(config.TOL_RANK, "--tol-rank"),
    trials: int = typer.Option(config.TRIALS, "--trials", min=1),
    seed: Optional[int] = typer.Option(
        None,
        "--seed",
        help=f"Seed of the rank sampling. Defaults to ${config.SEED_ENV_VAR}, then {config.SEED}.",
    ),
    report: Optional[Path] = typer.Option(None, "--report", help="Write the full report here."),
    debug: bool = typer.Option(False, "--debug", hidden=True),
):
    """Check count, orthonormality, Schmidt ranks and unextendibility."""
    _set_debug(debug)
    try:
        run_config = config.VerifyConfig.from_env(tol_orth, tol_rank, trials, seed)
        family = load_family(family_file)
    except (config.UebkError, OSError) as err:
        raise _bad_input(err)
    result = verify_family(family, run_config)
    if report is not None:
        save_report(result, report)
    typer.echo(f"{family.params.label}: {result.verdict}")
    if not result.passed:
        typer.echo(f"failed checks: {', '.join(result.failed_checks)}")
        raise typer.Exit(code=EXIT_FAIL)


@app.command("enumerate")
def enumerate_cmd(
    d: int = typer.Option(..., "--d"),
    dprime: int = typer.Option(..., "--dprime"),
    k: int = typer.Option(..., "--k"),
    convention: Convention = typer.Option(
        Convention.REPAIRED, "--convention", "--prop2-convention"
    ),
    umeb: bool = typer.Option(False, "--umeb"),
    debug: bool = typer.Option(False, "--debug", hidden=True),
):
    """List every admissible family at (d, d', k) with its member count."""
    _set_debug(debug)
    try:
        found = enumerate_families(d, dprime, k, convention=convention, umeb=umeb)
    except config.UebkError as err:
        raise _bad_input(err)
    for params in found:
        typer.echo(f"{params.label}: {params.expected_count} members")


@app.command("rho-perp")
def rho_perp_cmd(
    family_file: Path = typer.Argument(..., help="Family document written by `construct`."),
    k: int = typer.Option(..., "--k", help="Schmidt number the range is compared against."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the state document here."),
    trials: int = typer.Option(config.TRIALS, "--trials", min=1),
    seed: Optional[int] = typer.Option(None, "--seed"),
    entries: bool = typer.Option(
        False, "--entries", help="Include the dense matrix entries in the output document."
    ),
    debug: bool = typer.Option(False, "--debug", hidden=True),
):
    """Build the complementary mixed state and bound the Schmidt rank of its range."""
    _set_debug(debug)
    try:
        run_config = config.VerifyConfig.from_env(trials=trials, seed=seed)
        family = load_family(family_file)
    except (config.UebkError, OSError) as err:
        raise _bad_input(err)
    if k != family.k:
        LOG.warning("--k %s differs from the family's Schmidt number %s", k, family.k)
    try:
        state = certify_rho_perp(family, run_config, k=k)
        rho = rho_perp(family, run_config.tol_orth) if entries else None
    except (NotOrthonormalError, EmptyComplementError, InvalidStateError) as err:
        LOG.error(err)
        raise typer.Exit(code=EXIT_FAIL)
    if out is not None:
        save_state(state, out, rho.entries if rho is not None else None)
    typer.echo(
        f"{family.params.label}: rank {state.rank}, max range Schmidt rank "
        f"{state.range_bound.max_rank_observed}, below k: {state.range_bound.below_k}"
    )
    if not state.certified:
        raise typer.Exit(code=EXIT_FAIL)


@app.command("sweep")
def sweep_cmd(
    max_dprime: int = typer.Option(10, "--max-dprime", min=3),
    report_dir: Optional[Path] = typer.Option(None, "--report-dir"),
    workers: int = typer.Option(1, "--workers", min=1),
    trials: int = typer.Option(config.TRIALS, "--trials", min=1),
    seed: Optional[int] = typer.Option(None, "--seed"),
    convention: Convention = typer.Option(
        Convention.REPAIRED, "--convention", "--prop2-convention"
    ),
    include_umeb: bool = typer.Option(False, "--include-umeb"),
    debug: bool = typer.Option(False, "--debug", hidden=True),
):
    """Construct and verify every admissible family with 2 <= k < d <= d' <= max."""
    _set_debug(debug)
    try:
        run_config = config.VerifyConfig.from_env(trials=trials, seed=seed)
    except config.UebkError as err:
        raise _bad_input(err)
    summary = run_sweep(max_dprime, run_config, workers=workers, report_dir=report_dir,
                        convention=convention, include_umeb=include_umeb)
    for result in summary.failures:
        p = result.params
        typer.echo(
            f"FAIL {p.label} (d, d', k) = ({p.d}, {p.dprime}, {p.k}): "
            f"{', '.join(result.report.failed_checks) or 'rho_perp'}"
        )
    typer.echo(f"{summary.total - len(summary.failures)}/{summary.total} families passed")
    if not summary.passed:
        raise typer.Exit(code=EXIT_FAIL)
