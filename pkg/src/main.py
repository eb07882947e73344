"""
Weighted Erdős–Burgess laboratory command line.

Usage:
    python src/main.py idempotents --ring "Z/6"
    python src/main.py tfunc 3 2
    python src/main.py burgess --ring "Z/4" --psi id
    python src/main.py verify --ring "Z/4 x Z/4" --psi "swap(0,1)"
    python src/main.py sweep --max-order 16 --format csv --out sweep.csv

Artifacts go to stdout (or --out); logs go to stderr.

Exit codes: 0 success, 1 user error (including bad options), 2 incomplete
search (partial output is still written), 3 theorem violation or failed
construction claim.
"""
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, Optional

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

from automorphism import orbits, parse_psi
from cache import ResultCache, cached_computation
from config import ENGINE_VERSION, AppConfig
from exceptions import BurgessLabError, ConstructionContradiction
from ideal_lattice import prime_ideals
from report_tools import OutputFormat, render, write_artifact
from ring_spec import parse_ring
from rings import FiniteRing, idempotents, units
from schemas import (
    BurgessPayload,
    DavenportPayload,
    ElementsPayload,
    OrbitRecord,
    OrbitsPayload,
    PrimeRecord,
    PrimesPayload,
    SWEEP_COLUMNS,
    TFunctionPayload,
    VerifyPayload,
    WitnessPayload,
)
from sweep import DEFAULT_MAX_ORDER, SweepFamily, run_sweep, summarize
from witness_builder import LemmaContext, build_witness, verify_claims, verify_theorem
from zero_sum import t_function, t_function_bruteforce, t_function_positive, weighted_burgess, weighted_davenport

logger = logging.getLogger(__name__)

EXIT_USER_ERROR = 1
EXIT_INCOMPLETE = 2
EXIT_VIOLATION = 3

_LEVELS = ["WARNING", "INFO", "DEBUG"]


@dataclass
class LabSession:
    """Per-invocation state shared by the subcommands."""
    config: AppConfig
    cache: ResultCache
    output_format: OutputFormat
    out: Optional[Path]

    def cached(self, computation: str, params: Dict[str, Any], compute: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        @cached_computation(computation, lambda: self.cache)
        def run(**_: Any) -> Dict[str, Any]:
            return compute()

        return run(**params)

    def emit(self, payload: Any, columns=None) -> None:
        write_artifact(render(payload, self.output_format, columns), self.out)


def setup_logging(config: AppConfig, verbose: int) -> None:
    """RichHandler on stderr; each -v raises the level one step above the configured one."""
    base = _LEVELS.index(config.log_level) if config.log_level in _LEVELS else 0
    level = _LEVELS[min(base + verbose, len(_LEVELS) - 1)] if verbose else config.log_level
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@contextmanager
def user_errors() -> Iterator[None]:
    """Turn package errors into a one-line message and exit code 1; construction contradictions exit 3."""
    try:
        yield
    except ConstructionContradiction as e:
        logger.critical("construction contradiction: %s", e)
        click.echo(f"Error: construction contradiction: {e}", err=True)
        sys.exit(EXIT_VIOLATION)
    except BurgessLabError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USER_ERROR)


def _session(output_format: str, out: Optional[Path], no_cache: bool, verbose: int) -> LabSession:
    with user_errors():
        config = AppConfig.from_env()
    setup_logging(config, verbose)
    cache = ResultCache.from_config(config.cache, enabled=config.cache.enabled and not no_cache)
    return LabSession(config, cache, OutputFormat(output_format), out)


def common_options(func):
    """--format, --out, --no-cache and -v for every subcommand."""
    func = click.option("-v", "--verbose", count=True, help="Raise the log level (repeatable)")(func)
    func = click.option("--no-cache", is_flag=True, help="Neither read nor write the result cache")(func)
    func = click.option(
        "--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write to a file instead of stdout"
    )(func)
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice([f.value for f in OutputFormat]),
        default=OutputFormat.JSON.value,
        show_default=True,
    )(func)
    return func


ring_option = click.option("--ring", "ring_spec", required=True, help='Ring spec, e.g. "Z/12" or "GF(4) x GF(4)"')
psi_option = click.option(
    "--psi", default="id", show_default=True, help="id | full | swap(i,j) | frobenius(i) | cyclic(k) | gens:<file>, joined by +"
)


def _weights(ring: FiniteRing, psi: str):
    group = parse_psi(ring, psi)
    return group, {"ring": ring.label, "psi": group.descriptor, "psi_fingerprint": group.fingerprint}


def _exit_for(payload: Dict[str, Any]) -> None:
    failed_claims = [name for name, verdict in payload.get("claims", {}).items() if not verdict["passed"]]
    if payload.get("violation") or failed_claims:
        sys.exit(EXIT_VIOLATION)
    if payload.get("complete") is False:
        sys.exit(EXIT_INCOMPLETE)


class LabGroup(click.Group):
    """Command group whose usage errors share the user-error exit code."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USER_ERROR
            raise


@click.group(cls=LabGroup)
@click.version_option(version=ENGINE_VERSION, prog_name="burgess-lab")
def cli():
    """
    Weighted Davenport and Erdős–Burgess constants of finite commutative rings.

    Examples:

        main.py tfunc 3 2

        main.py burgess --ring "Z/4" --psi id

        main.py verify --ring "GF(4) x GF(4)" --psi full
    """
    load_dotenv()


@cli.command("idempotents")
@ring_option
@common_options
def idempotents_command(ring_spec: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """List the idempotents of a ring."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        elements = [e.display for e in idempotents(ring)]
        session.emit(ElementsPayload(ring_spec=ring.label, order=ring.order, count=len(elements), elements=elements))


@cli.command("units")
@ring_option
@common_options
def units_command(ring_spec: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """List the units of a ring."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        elements = [e.display for e in units(ring)]
        session.emit(ElementsPayload(ring_spec=ring.label, order=ring.order, count=len(elements), elements=elements))


@cli.command("spec-primes")
@ring_option
@common_options
def spec_primes_command(ring_spec: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """Prime ideals with generators, index and size."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        primes = [PrimeRecord(**p.to_dict()) for p in prime_ideals(ring)]
        session.emit(PrimesPayload(ring_spec=ring.label, primes=primes))


@cli.command("orbits")
@ring_option
@psi_option
@common_options
def orbits_command(ring_spec: str, psi: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """Orbits of the weight group on Spec R."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        group, _ = _weights(ring, psi)
        records = [OrbitRecord(**o.to_dict()) for o in orbits(group, prime_ideals(ring))]
        session.emit(OrbitsPayload(ring_spec=ring.label, psi=group.descriptor, psi_order=group.size, orbits=records))


@cli.command("tfunc")
@click.argument("m", type=click.IntRange(min=1))
@click.argument("h", type=click.IntRange(min=1))
@click.option("--bruteforce", is_flag=True, help="Also report the exhaustive value")
@click.option("--positive", is_flag=True, help="Also report the strictly positive reading")
@common_options
def tfunc_command(
    m: int, h: int, bruteforce: bool, positive: bool, output_format: str, out: Optional[Path], no_cache: bool, verbose: int
):
    """T(M;H) and its maximizing profile."""
    session = _session(output_format, out, no_cache, verbose)
    profile = t_function(m, h)
    fields: Dict[str, Any] = {"value": profile.value, "profile": list(profile.multiplicities)}
    if bruteforce:
        fields["bruteforce"] = t_function_bruteforce(m, h)
    if positive:
        fields["strictly_positive"] = t_function_positive(m, h)
    payload = TFunctionPayload(**fields).model_dump(mode="json", exclude_unset=True)
    session.emit(payload)


@cli.command("davenport")
@ring_option
@psi_option
@common_options
def davenport_command(ring_spec: str, psi: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """Weighted Davenport constant of the unit group."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        group, params = _weights(ring, psi)

        def compute() -> Dict[str, Any]:
            result = weighted_davenport(ring, group, session.config.search)
            return DavenportPayload(
                ring_spec=ring.label, psi=group.descriptor, psi_order=group.size, D=result.value,
                witness=result.witness.display(), complete=result.complete, nodes=result.nodes,
            ).model_dump(mode="json")

        payload = session.cached("davenport", params, compute)
    session.emit(payload)
    _exit_for(payload)


@cli.command("burgess")
@ring_option
@psi_option
@common_options
def burgess_command(ring_spec: str, psi: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """Weighted Erdős–Burgess constant of the ring."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        group, params = _weights(ring, psi)

        def compute() -> Dict[str, Any]:
            result = weighted_burgess(ring, group, session.config.search)
            return BurgessPayload(
                ring_spec=ring.label, psi=group.descriptor, psi_order=group.size, I=result.value,
                witness=result.witness.display(), complete=result.complete, nodes=result.nodes,
            ).model_dump(mode="json")

        payload = session.cached("burgess", params, compute)
    session.emit(payload)
    _exit_for(payload)


@cli.command("witness")
@ring_option
@psi_option
@common_options
def witness_command(ring_spec: str, psi: str, output_format: str, out: Optional[Path], no_cache: bool, verbose: int):
    """Build the lower-bound witness sequence."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        group, params = _weights(ring, psi)

        def compute() -> Dict[str, Any]:
            context = LemmaContext(ring, group)
            report = build_witness(ring, group, session.config, context)
            report.claims = verify_claims(ring, group, report, context, session.config)
            return WitnessPayload(**report.to_dict()).model_dump(mode="json")

        payload = session.cached("witness", params, compute)
    session.emit(payload)
    _exit_for(payload)


@cli.command("verify")
@ring_option
@psi_option
@click.option("--no-burgess", is_flag=True, help="Skip the exhaustive search for I_Psi(R)")
@common_options
def verify_command(
    ring_spec: str, psi: str, no_burgess: bool, output_format: str, out: Optional[Path], no_cache: bool, verbose: int
):
    """Witness, every construction claim, and the comparison with I_Psi(R)."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        ring = parse_ring(ring_spec, session.config.ring.max_order)
        group, params = _weights(ring, psi)
        params["burgess"] = not no_burgess

        def compute() -> Dict[str, Any]:
            context = LemmaContext(ring, group)
            report = build_witness(ring, group, session.config, context)
            claims = verify_claims(ring, group, report, context, session.config)
            theorem = verify_theorem(ring, group, session.config, report, context, compute_burgess=not no_burgess)
            fields = theorem.to_dict()
            fields["witness"] = report.witness.display()
            fields["claims"] = {name: verdict.to_dict() for name, verdict in sorted(claims.items())}
            return VerifyPayload(**fields).model_dump(mode="json")

        payload = session.cached("verify", params, compute)
    session.emit(payload)
    _exit_for(payload)


@cli.command("sweep")
@click.option("--family", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="YAML family file; defaults to every supported ring of order <= --max-order")
@click.option("--max-order", type=click.IntRange(min=2), default=None,
              help=f"Order cap of the default family [default: {DEFAULT_MAX_ORDER}]")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes [default: BURGESS_WORKERS]")
@click.option("--timing", is_flag=True, help="Fill runtime_ms (output is then no longer reproducible)")
@click.option("--claims", is_flag=True, help="Also run every construction claim per instance")
@common_options
def sweep_command(
    family: Optional[Path],
    max_order: Optional[int],
    workers: Optional[int],
    timing: bool,
    claims: bool,
    output_format: str,
    out: Optional[Path],
    no_cache: bool,
    verbose: int,
):
    """Compare I_Psi(R) with the bound over a family of instances."""
    session = _session(output_format, out, no_cache, verbose)
    with user_errors():
        if family is not None:
            sweep_family = SweepFamily.from_yaml(family, max_order)
        else:
            sweep_family = SweepFamily.default(max_order or DEFAULT_MAX_ORDER)
        instances = sweep_family.expand()
        rows = run_sweep(
            instances,
            workers=workers or session.config.workers,
            timing=timing,
            claims=claims,
            use_cache=session.cache.enabled,
        )
    summary = summarize(rows)
    if session.output_format is OutputFormat.CSV:
        session.emit(rows, SWEEP_COLUMNS)
    else:
        session.emit({"rows": [r.model_dump(mode="json") for r in rows], "summary": summary})
    if summary["violations"] or summary["claim_failures"]:
        sys.exit(EXIT_VIOLATION)
    if summary["incomplete"] or summary["errors"]:
        sys.exit(EXIT_INCOMPLETE)


if __name__ == "__main__":
    cli()
