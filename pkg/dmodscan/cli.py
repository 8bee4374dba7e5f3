from __future__ import annotations

import logging
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import typer

from .checks import CheckContext, get_global_registry
from .config import DEFAULT_DEGREE_BOUND, DEFAULT_SEED, Command, OutputFormat, RunConfig
from .errors import ContentError, DmodError
from .exactnum import format_rational, parse_rational
from .ident import (
    AlphaOrbit,
    ClosedSuperalgebra,
    DEFAULT_CATALOGUE,
    extract_alpha,
    extract_constants,
    identify,
    is_degenerate_d21,
)
from .presets import describe_presets, resolve_content
from .report.render import (
    algebra_record,
    closure_record,
    dumps,
    render_algebra_text,
    render_catalogue,
    render_closure_text,
    render_table_text,
    table_record,
    verify_record,
    write_output,
)
from .scf import ClosureKind, build_generators, find_critical, saturate
from .sigma import build_table
from .susy import build_multiplet

app = typer.Typer(add_completion=False, help="dmodscan: multiplet → closure → identify → table")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NEVER = 2
EXIT_USAGE = 64

logger = logging.getLogger(__name__)


class UsageError(ContentError):
    """Flags that parse but do not make sense together."""


def _configure_logging(*, quiet: bool, verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _log(out: Optional[Path], msg: str) -> None:
    if out is None:
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        p = out.parent / "run.log"
        ts = datetime.now(timezone.utc).isoformat()
        with p.open("a", encoding="utf-8") as f:
            f.write(f"[{ts}] {msg.rstrip()}\n")
    except OSError:
        pass


def _stage(cfg: RunConfig, label: str) -> None:
    line = f"→ {label}"
    _log(cfg.output_path, line)
    if (not cfg.quiet) and cfg.verbose:
        typer.secho(line, fg=typer.colors.CYAN, bold=True, err=True)


def banner(*, quiet: bool) -> None:
    if quiet or not sys.stdout.isatty():
        return
    typer.secho("  d m o d s c a n", fg=typer.colors.WHITE, bold=True)
    typer.secho("  multiplet ", fg=typer.colors.WHITE, nl=False)
    typer.secho("→", fg=typer.colors.RED, nl=False, bold=True)
    typer.secho(" closure ", fg=typer.colors.WHITE, nl=False)
    typer.secho("→", fg=typer.colors.RED, nl=False, bold=True)
    typer.secho(" identify ", fg=typer.colors.WHITE, nl=False)
    typer.secho("→", fg=typer.colors.BLUE, nl=False, bold=True)
    typer.secho(" table", fg=typer.colors.WHITE)
    typer.echo("")


def _emit(cfg: RunConfig, text: str) -> None:
    """Result text goes to ``--out`` when given, stdout otherwise."""
    if cfg.output_path is None:
        typer.echo(text, nl=False)
        return
    write_output(text, cfg.output_path)
    _log(cfg.output_path, f"wrote {cfg.output_path.name}")
    if not cfg.quiet:
        typer.secho(f"[+] Wrote {cfg.output_path}", fg=typer.colors.GREEN, err=True)


@contextmanager
def _exit_codes() -> Iterator[None]:
    try:
        yield
    except ContentError as e:
        typer.secho(f"[!] {e}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=EXIT_USAGE)
    except DmodError as e:
        typer.secho(f"[!] {type(e).__name__}: {e}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=EXIT_FAILURE)
    except (typer.Exit, typer.Abort):
        raise
    except Exception as e:
        logger.exception("unexpected error")
        typer.secho(f"[!] internal error: {type(e).__name__}: {e}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=EXIT_FAILURE)


def _parse_lambda(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return parse_rational(text)
    except ValueError as e:
        raise UsageError(f"--lambda: {e}") from e


def _parse_triples(text: Optional[str]) -> Optional[List[Tuple[int, int, int]]]:
    """``"1,2,3;1,4,5;..."`` into a multiplication table override."""
    if not text:
        return None
    out = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",") if p.strip()]
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise UsageError(f"--octonion-triples: bad triple {chunk!r}")
        a, b, c = (int(p) for p in parts)
        out.append((a, b, c))
    return out


# --- commands ----------------------------------------------------------------------

def cmd_critical(cfg: RunConfig) -> int:
    content = resolve_content(cfg.content)
    _stage(cfg, f"closure {content.label}")
    result = find_critical(content, cfg.degree_bound)
    logger.info("%s: %s %s", content, result.kind.value, [format_rational(x) for x in result.critical])
    if cfg.output_format is OutputFormat.JSON:
        _emit(cfg, dumps(closure_record(result)))
    else:
        _emit(cfg, render_closure_text(result))
    return EXIT_NEVER if result.kind is ClosureKind.NEVER else EXIT_OK


def cmd_table(cfg: RunConfig) -> int:
    _stage(cfg, "table")
    rows = build_table(cfg.degree_bound)
    if cfg.output_format is OutputFormat.JSON:
        _emit(cfg, dumps(table_record(rows)))
    else:
        _emit(cfg, render_table_text(rows))
    return EXIT_OK


def _export_algebra(cfg: RunConfig) -> Tuple[Optional[ClosedSuperalgebra], str]:
    """Closed algebra to export plus its name; ``(None, reason)`` when nothing closes."""
    content = resolve_content(cfg.content)
    if cfg.lambda_override is not None:
        lam = cfg.lambda_override
        _stage(cfg, f"saturate {content.label} at lambda={format_rational(lam)}")
        report = saturate(build_generators(build_multiplet(content), lam))
        if not report.closed:
            return None, f"{content.label} does not close at lambda={format_rational(lam)} ({report.diagnostic})"
        alg = extract_constants(report)
        return alg, identify(alg)

    _stage(cfg, f"closure {content.label}")
    result = find_critical(content, cfg.degree_bound)
    if result.kind is ClosureKind.ANY:
        raise UsageError(f"{content.label} closes for every lambda; pass --lambda to pick one")
    if result.kind is ClosureKind.NEVER:
        return None, f"{content.label} has no critical lambda"
    if len(result.critical) > 1:
        logger.warning("%s has %d critical values; exporting the smallest", content, len(result.critical))
    return result.witnesses[0], result.names[0]


def cmd_export(cfg: RunConfig) -> int:
    alg, name = _export_algebra(cfg)
    if alg is None:
        typer.secho(f"[-] {name}", fg=typer.colors.YELLOW, err=True)
        return EXIT_NEVER
    orbit: Optional[AlphaOrbit] = None
    if alg.n_susy == 4 and (alg.signature == "9|8" or is_degenerate_d21(alg)):
        _stage(cfg, "alpha")
        orbit = extract_alpha(alg)
    if cfg.output_format is OutputFormat.JSON:
        _emit(cfg, dumps(algebra_record(alg, name, orbit)))
    else:
        _emit(cfg, render_algebra_text(alg, name, orbit))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, *, skip_slow: bool = False, octonion_triples=None) -> int:
    ctx = CheckContext(cfg.seed, cfg.degree_bound, skip_slow, octonion_triples)
    registry = get_global_registry()
    outcomes = []
    for meta in registry.list_checks():
        if skip_slow and meta.slow:
            continue
        _stage(cfg, f"check {meta.name}")
        outcomes.extend(registry.run_all(ctx, names=[meta.name]))
    failed = [o for o in outcomes if not o.passed]

    if cfg.output_format is OutputFormat.JSON:
        _emit(cfg, dumps(verify_record(outcomes, cfg.seed, skip_slow)))
    else:
        lines = [f"[{'PASS' if o.passed else 'FAIL'}] {o.name}" + (f"  {o.detail}" if o.detail else "") for o in outcomes]
        lines.append(f"{len(outcomes) - len(failed)} passed, {len(failed)} failed")
        _emit(cfg, "\n".join(lines) + "\n")
    if failed:
        typer.secho(f"[!] first failing property: {failed[0].name}", fg=typer.colors.RED, err=True)
        return EXIT_FAILURE
    return EXIT_OK


# --- typer surface -----------------------------------------------------------------

def _run(cfg: RunConfig, fn, **kwargs) -> None:
    _configure_logging(quiet=cfg.quiet, verbose=cfg.verbose)
    banner(quiet=cfg.quiet)
    _log(cfg.output_path, f"dmodscan {cfg.command.value} content={cfg.content}")
    with _exit_codes():
        code = fn(cfg.validate(), **kwargs)
    raise typer.Exit(code=code)


_CONTENT_HELP = "Field content: 'D,N', a tuple like '(1,7,7,1)', or a preset name (see: dmodscan presets)"


@app.command(name="presets")
def presets():
    """List named field contents accepted by --content."""
    typer.echo("\n".join(describe_presets()))


@app.command(name="algebras")
def algebras():
    """List the superconformal algebra catalogue used for identification."""
    typer.echo(render_catalogue(DEFAULT_CATALOGUE), nl=False)


@app.command(name="critical")
def critical(
    content: Optional[str] = typer.Option(None, "--content", "-c", help=_CONTENT_HELP),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the result here instead of stdout"),
    degree_bound: int = typer.Option(DEFAULT_DEGREE_BOUND, "--degree-bound", help="Residual degree bound (doubled once on overflow)"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Errors only"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Stage output + debug logging"),
):
    """Find the critical scaling dimensions of a multiplet. Exit 2 when it never closes."""
    cfg = RunConfig(Command.CRITICAL, content, None, fmt, out, degree_bound, quiet=quiet, verbose=verbose)
    _run(cfg, cmd_critical)


@app.command(name="table")
def table(
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the table here instead of stdout"),
    degree_bound: int = typer.Option(DEFAULT_DEGREE_BOUND, "--degree-bound", help="Residual degree bound"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Errors only"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Stage output + debug logging"),
):
    """Print the D = 0..8 sigma-model table for the (D,8,8-D) multiplets."""
    cfg = RunConfig(Command.TABLE, None, None, fmt, out, degree_bound, quiet=quiet, verbose=verbose)
    _run(cfg, cmd_table)


@app.command(name="export")
def export(
    content: Optional[str] = typer.Option(None, "--content", "-c", help=_CONTENT_HELP),
    lam: Optional[str] = typer.Option(None, "--lambda", "-l", help="Scaling dimension, e.g. 1/2 (required when the content closes for every lambda)"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the record here instead of stdout"),
    degree_bound: int = typer.Option(DEFAULT_DEGREE_BOUND, "--degree-bound", help="Residual degree bound"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Errors only"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Stage output + debug logging"),
):
    """Export the structure constants of the closed superalgebra."""
    with _exit_codes():
        parsed = _parse_lambda(lam)
    cfg = RunConfig(Command.EXPORT, content, parsed, fmt, out, degree_bound, quiet=quiet, verbose=verbose)
    _run(cfg, cmd_export)


@app.command(name="verify")
def verify(
    seed: int = typer.Option(DEFAULT_SEED, "--seed", help="Seed for the randomized checks"),
    skip_slow: bool = typer.Option(False, "--skip-slow", help="Skip the N=7 and N=8 criticality searches"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the summary here instead of stdout"),
    degree_bound: int = typer.Option(DEFAULT_DEGREE_BOUND, "--degree-bound", help="Residual degree bound"),
    octonion_triples: Optional[str] = typer.Option(None, "--octonion-triples", hidden=True),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Errors only"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Stage output + debug logging"),
):
    """Run the acceptance suite; exit 1 naming the first failing property."""
    with _exit_codes():
        triples = _parse_triples(octonion_triples)
    cfg = RunConfig(Command.VERIFY, None, None, fmt, out, degree_bound, seed, quiet=quiet, verbose=verbose)
    _run(cfg, cmd_verify, skip_slow=skip_slow, octonion_triples=triples)
