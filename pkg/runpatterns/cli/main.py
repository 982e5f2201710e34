"""
Command-line interface for runpatterns.

Usage:
    runpatterns scan --type t1 --l1 1 --k1 2 --l2 1 00111101100010100011
    runpatterns pmf --type t3 --l1 1 --k1 2 --l2 1 --k2 1 --p 0.35 --n 60
    runpatterns waiting --type t3 --l1 1 --k1 2 --l2 1 --k2 1 --p 0.5 --r 1 --mmax 10
    runpatterns moments --type t1 --l1 1 --k1 1 --l2 1 --p 0.5 --r 1 --jmax 2
    runpatterns table 1
    runpatterns check --n 8
    runpatterns fib --n 10
    runpatterns chain --type t3 --l1 1 --k1 2 --l2 1 --k2 1 --p 0.5
"""
import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click
from pydantic import ValidationError as PydanticValidationError

from runpatterns.cli.formatting import (
    csv_text,
    format_float,
    json_text,
    moment_records,
    pmf_records,
    records_csv,
    table_csv,
)
from runpatterns.core.config import get_settings
from runpatterns.core.exceptions import BaseAppException, CheckFailedError, ValidationError
from runpatterns.core.logging import get_logger, setup_logging
from runpatterns.core.validators import validate_spec
from runpatterns.schemas.distribution import Pmf
from runpatterns.schemas.output import CommandOutput
from runpatterns.schemas.pattern import PatternKind, PatternSpec, TrialParams
from runpatterns.schemas.sequence import parse_bits
from runpatterns.services.chain import chain_service
from runpatterns.services.check import DEFAULT_P_VALUES, check_service
from runpatterns.services.count_dist import count_dist_service
from runpatterns.services.fibwords import fibword_service
from runpatterns.services.oracle import oracle_service
from runpatterns.services.scanner import scanner_service
from runpatterns.services.tables import table_service
from runpatterns.services.waiting import waiting_service

settings = get_settings()
logger = get_logger(__name__)

# config-file keys that differ from the parameter they set
_CONFIG_ALIASES = {"type": "kind", "json": "as_json"}


def _load_config(ctx: click.Context, _param: click.Parameter, path: Optional[str]) -> None:
    """Turn a flat key=value file into defaults for every subcommand."""
    if not path:
        return
    values: dict[str, str] = {}
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.BadParameter(f"line {number} is not key=value", ctx=ctx)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        values[_CONFIG_ALIASES.get(key, key)] = value
    ctx.default_map = {name: dict(values) for name in cli.commands}


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map application errors to their exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except BaseAppException as exc:
            click.echo(f"error: {exc.message}", err=True)
            if exc.details:
                click.echo(f"details: {json.dumps(exc.details, default=str)}", err=True)
            sys.exit(exc.exit_code)
        except PydanticValidationError as exc:
            first = exc.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or "input"
            click.echo(f"error: {where}: {first['msg']}", err=True)
            sys.exit(2)

    return wrapper


def spec_options(func: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option(
            "--type", "kind", type=click.Choice([k.value for k in PatternKind]), help="Pattern type"
        ),
        click.option("--l1", type=int, help="Least zeros-run length"),
        click.option("--k1", type=int, default=None, help="Largest zeros-run length (t1, t3)"),
        click.option("--l2", type=int, help="Least ones-run length"),
        click.option("--k2", type=int, default=None, help="Largest ones-run length (t2, t3)"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def json_option(func: Callable[..., Any]) -> Callable[..., Any]:
    return click.option("--json", "as_json", is_flag=True, help="Emit one JSON object")(func)


def build_spec(
    kind: Optional[str], l1: Optional[int], k1: Optional[int], l2: Optional[int], k2: Optional[int]
) -> PatternSpec:
    if kind is None or l1 is None or l2 is None:
        raise ValidationError("--type, --l1 and --l2 are required")
    return validate_spec(PatternSpec(kind=PatternKind(kind), ell1=l1, k1=k1, ell2=l2, k2=k2))


def _spec_echo(spec: PatternSpec) -> dict[str, Any]:
    return spec.model_dump(mode="json")


def _emit_pmf(
    pmf: Pmf, spec: PatternSpec, params: dict[str, Any], backend: str, as_json: bool
) -> None:
    records = pmf_records(pmf)
    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    spec=_spec_echo(spec),
                    params=params,
                    backend=backend,
                    values=records,
                    tail_mass=pmf.tail_mass,
                )
            )
        )
        return
    click.echo(records_csv(records, ("m", "probability")), nl=False)
    if pmf.tail_mass > 0:
        click.echo(f"tail_mass,{format_float(pmf.tail_mass)}", err=True)


@click.group()
@click.version_option(version=settings.APP_VERSION, prog_name=settings.APP_NAME)
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config,
    is_eager=True,
    expose_value=False,
    help="Flat key=value file of flag defaults",
)
@click.option("--log-level", default=None, help="Override RUNPATTERNS_LOG_LEVEL")
def cli(log_level: Optional[str]):
    """
    Exact distributions of (k1,k2)-run patterns in Bernoulli trials.

    Examples:

        runpatterns pmf --type t3 --l1 1 --k1 2 --l2 1 --k2 1 --p 0.35 --n 60

        runpatterns table 2
    """
    setup_logging(log_level)


@cli.command()
@spec_options
@click.option("--r", "r", type=int, default=None, help="Also list the first r completion trials")
@click.option(
    "--backend", type=click.Choice(["runs", "indicator"]), default="runs", show_default=True
)
@json_option
@click.argument("source", required=False, default="")
@handle_errors
def scan(kind, l1, k1, l2, k2, r, backend, as_json, source):
    """Count occurrences in a bit string, a file, or stdin ('-')."""
    spec = build_spec(kind, l1, k1, l2, k2)
    if source == "-":
        text = click.get_text_stream("stdin").read()
    elif source and Path(source).is_file():
        text = Path(source).read_text()
    else:
        text = source
    seq = parse_bits(text)
    if backend == "indicator":
        count = scanner_service.count_indicator(seq, spec)
    else:
        count = scanner_service.count_runs(seq, spec)
    completions = scanner_service.completion_trials(seq, spec)[:r] if r else []
    logger.info("sequence_scanned", spec=spec.label, length=len(seq), count=count)

    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    spec=_spec_echo(spec),
                    params={"length": len(seq), "r": r},
                    backend=backend,
                    values=[{"count": count, "completion_trials": completions}],
                )
            )
        )
        return
    click.echo(count)
    if r:
        click.echo(csv_text(("r", "trial"), enumerate(completions, start=1)), nl=False)


@cli.command()
@spec_options
@click.option("--p", type=float, required=True, help="Success probability")
@click.option("--n", type=int, required=True, help="Number of trials")
@click.option(
    "--backend",
    type=click.Choice(["recursive", "chain", "explicit", "oracle"]),
    default="recursive",
    show_default=True,
)
@json_option
@handle_errors
def pmf(kind, l1, k1, l2, k2, p, n, backend, as_json):
    """Distribution of the number of occurrences in n trials."""
    spec = build_spec(kind, l1, k1, l2, k2)
    params = TrialParams(p=p)
    result = _count_pmf(spec, params, n, backend)
    _emit_pmf(result, spec, {"p": p, "n": n}, backend, as_json)


def _count_pmf(spec: PatternSpec, params: TrialParams, n: int, backend: str) -> Pmf:
    if backend == "chain":
        return chain_service.chain_pmf(chain_service.build_chain(spec, params), n)
    if backend == "explicit":
        return count_dist_service.pmf_explicit(spec, params, n)
    if backend == "oracle":
        return oracle_service.oracle_count_pmf(spec, params, n)
    return count_dist_service.pmf_recursive(spec, params, n)


@cli.command()
@spec_options
@click.option("--p", type=float, required=True, help="Success probability")
@click.option("--n", type=int, default=None, help="Moments of the count after n trials")
@click.option("--r", "r", type=int, default=None, help="Moments of the r-th waiting time")
@click.option("--jmax", type=int, default=2, show_default=True, help="Highest moment order")
@click.option(
    "--backend",
    type=click.Choice(["recursive", "chain", "explicit", "oracle", "series"]),
    default="recursive",
    show_default=True,
)
@json_option
@handle_errors
def moments(kind, l1, k1, l2, k2, p, n, r, jmax, backend, as_json):
    """Non-central moments of the count (--n) or of a waiting time (--r)."""
    spec = build_spec(kind, l1, k1, l2, k2)
    params = TrialParams(p=p)
    if (n is None) == (r is None):
        raise ValidationError("give exactly one of --n or --r")
    if jmax < 0:
        raise ValidationError("--jmax must be nonnegative", details={"jmax": jmax})

    tail_mass = 0.0
    if n is not None:
        if backend == "series":
            raise ValidationError("the series backend is for waiting times")
        if backend == "recursive":
            values = list(count_dist_service.moments_recursive(spec, params, n, jmax).values)
        else:
            table = _count_pmf(spec, params, n, backend)
            values = [oracle_service.oracle_moment(table, j).value for j in range(jmax + 1)]
        run_params = {"p": p, "n": n, "jmax": jmax}
    else:
        if backend == "recursive":
            values = list(waiting_service.waiting_moments(spec, params, r, jmax).values)
        elif backend == "series":
            table = waiting_service.waiting_pmf_series(spec, params, r)
            values = [oracle_service.oracle_moment(table, j).value for j in range(jmax + 1)]
            tail_mass = table.tail_mass
        else:
            raise ValidationError(f"backend {backend} has no waiting-time moments")
        run_params = {"p": p, "r": r, "jmax": jmax}

    records = moment_records(values)
    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    spec=_spec_echo(spec),
                    params=run_params,
                    backend=backend,
                    values=records,
                    tail_mass=tail_mass,
                )
            )
        )
        return
    click.echo(records_csv(records, ("j", "moment")), nl=False)
    if tail_mass > 0:
        click.echo(f"tail_mass,{format_float(tail_mass)}", err=True)


@cli.command()
@spec_options
@click.option("--p", type=float, required=True, help="Success probability")
@click.option("--r", "r", type=int, default=1, show_default=True, help="Occurrence number")
@click.option("--mmax", type=int, default=None, help="Last trial index to report")
@click.option(
    "--backend",
    type=click.Choice(["recursive", "series", "chain", "oracle"]),
    default="recursive",
    show_default=True,
)
@json_option
@handle_errors
def waiting(kind, l1, k1, l2, k2, p, r, mmax, backend, as_json):
    """Distribution of the trial at which the r-th occurrence completes."""
    spec = build_spec(kind, l1, k1, l2, k2)
    params = TrialParams(p=p)
    if backend in ("chain", "oracle") and mmax is None:
        raise ValidationError(f"--mmax is required for the {backend} backend")
    if backend == "series":
        result = waiting_service.waiting_pmf_series(spec, params, r, mmax)
    elif backend == "chain":
        result = chain_service.chain_waiting_pmf(chain_service.build_chain(spec, params), r, mmax)
    elif backend == "oracle":
        result = oracle_service.oracle_waiting_pmf(spec, params, r, mmax)
    else:
        result = waiting_service.waiting_pmf_recursive(spec, params, r, mmax)
    _emit_pmf(result, spec, {"p": p, "r": r, "mmax": mmax}, backend, as_json)


@cli.command()
@click.argument("which", type=click.Choice(["1", "2"]))
@json_option
@handle_errors
def table(which, as_json):
    """Reproduce the count table (1) or the waiting-time table (2)."""
    result = table_service.table(int(which))
    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    spec=result.spec,
                    params={"table": int(which)},
                    backend="recursive",
                    values=[column.model_dump() for column in result.columns],
                )
            )
        )
        return
    click.echo(table_csv(result), nl=False)


@cli.command()
@click.option("--n", "max_n", type=int, default=12, show_default=True, help="Largest n checked")
@click.option("--l", "ell_values", type=int, multiple=True, help="l1/l2 values (default 1 2 3)")
@click.option("--k-offset", "k_offsets", type=int, multiple=True, help="k - l values (default 0 1 2)")
@click.option("--p", "p_values", type=float, multiple=True, help="p values (default 0.1 .. 0.9)")
@click.option("--r", "r_values", type=int, multiple=True, help="Waiting r values (default 1 2 3)")
@click.option("--oracle/--no-oracle", default=True, show_default=True)
@click.option("--waiting/--no-waiting", "include_waiting", default=True, show_default=True)
@click.option("--workers", type=int, default=None, help="Worker threads")
@json_option
@handle_errors
def check(max_n, ell_values, k_offsets, p_values, r_values, oracle, include_waiting, workers, as_json):
    """Cross-check every backend pairwise over a grid."""
    report = check_service.run(
        max_n=max_n,
        ell_values=ell_values or (1, 2, 3),
        k_offsets=k_offsets or (0, 1, 2),
        p_values=p_values or DEFAULT_P_VALUES,
        r_values=r_values or (1, 2, 3),
        include_oracle=oracle,
        include_waiting=include_waiting,
        workers=workers,
    )
    for notice in report.skipped:
        click.echo(f"skipped: {notice}", err=True)
    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    params={"max_n": max_n},
                    backend="check",
                    values=[pair.model_dump() | {"passed": pair.passed} for pair in report.pairs],
                )
            )
        )
    else:
        rows = [
            (
                pair.pair,
                format_float(pair.tolerance),
                format_float(pair.max_discrepancy),
                pair.cells,
                "ok" if pair.passed else "FAIL",
                json.dumps(pair.worst, sort_keys=True) if pair.worst else "",
            )
            for pair in report.pairs
        ]
        click.echo(
            csv_text(("pair", "tolerance", "max_discrepancy", "cells", "status", "worst"), rows),
            nl=False,
        )
    if not report.passed:
        failed = next(pair for pair in report.pairs if not pair.passed)
        raise CheckFailedError(
            f"{failed.pair} exceeds tolerance {format_float(failed.tolerance)}",
            details={"max_discrepancy": failed.max_discrepancy, "at": failed.worst},
        )


@cli.command()
@click.option("--n", type=int, required=True, help="Fibonacci word index")
@click.option("--p", type=float, default=None, help="Model p (default: density of 1s)")
@click.option("--show-word", is_flag=True, help="Include the word itself")
@json_option
@handle_errors
def fib(n, p, show_word, as_json):
    """Structural pattern counts of a Fibonacci word beside model means."""
    report = fibword_service.fib_report(n, p, include_word=show_word)
    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    params={"n": n, "p": report.p, "length": report.length},
                    backend="fibwords",
                    values=[pattern.model_dump() for pattern in report.patterns],
                )
            )
        )
        return
    click.echo(report.model_dump_json(exclude_none=True))


@cli.command()
@spec_options
@click.option("--p", type=float, required=True, help="Success probability")
@click.option("--labels", is_flag=True, help="Print the state meaning table instead")
@json_option
@handle_errors
def chain(kind, l1, k1, l2, k2, p, labels, as_json):
    """Dump the embedded chain's initial row and matrices."""
    spec = build_spec(kind, l1, k1, l2, k2)
    if labels:
        meanings = chain_service.state_labels(spec)
        click.echo(csv_text(("state", "meaning"), enumerate(meanings, start=1)), nl=False)
        return
    embedding = chain_service.build_chain(spec, TrialParams(p=p))
    if as_json:
        click.echo(
            json_text(
                CommandOutput(
                    spec=_spec_echo(spec),
                    params={"p": p},
                    backend="chain",
                    values=[
                        embedding.kappa0.tolist(),
                        embedding.a_matrix.tolist(),
                        embedding.b_matrix.tolist(),
                    ],
                )
            )
        )
        return
    click.echo(chain_service.dump_csv(embedding), nl=False)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
