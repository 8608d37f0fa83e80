"""
Main Entry Point
Units-of-measure inference, checking, suggestion and synthesis for Fortran sources

Usage:
    unitcheck infer ballistics.f90                 # Print the inferred unit of every variable
    unitcheck check ballistics.f90                 # Silent unless annotations disagree
    unitcheck suggest ballistics.f90               # Variables worth annotating
    unitcheck synth ballistics.f90 --out out.f90   # Insert inferred annotations as comments
    unitcheck compile helper.f90                   # Write helper.fsmod next to the source
    unitcheck generate -n 10 -l 20 -a 2 --out gen  # Write a synthetic corpus
"""

import functools
import logging
import os
import sys

import click

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from commands import (  # noqa: E402
    GeneratorParams,
    Session,
    UnitAnalysis,
    generate,
    group_by_file,
    inconsistency_diagnostic,
    infer_report,
    render_all,
    suggest_report,
    synthesise_file,
)
from commands.generator import FORMATS, MULTIPLE  # noqa: E402
from frontend.ast import MODULE  # noqa: E402
from summaries import compile_module, write_summary  # noqa: E402
from utils import Config, atomic_write_text  # noqa: E402
from utils.errors import UnitcheckError  # noqa: E402

# ============================================================================
# CONSTANTS
# ============================================================================
EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_ERROR = 2

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

logger = logging.getLogger("Main")


# ============================================================================
# LOGGING
# ============================================================================
def configure_logging(verbose: bool, debug: bool):
    level = logging.DEBUG if debug else logging.INFO if verbose else Config.LOG_LEVEL
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if Config.LOG_FILE:
        handlers.append(logging.FileHandler(Config.LOG_FILE, encoding="utf-8"))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


# ============================================================================
# HELPERS
# ============================================================================
def handle_errors(command):
    """Run a command body, mapping failures onto the exit-code contract."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            code = command(*args, **kwargs)
        except UnitcheckError as e:
            logger.debug(f"[MAIN] {type(e).__name__}: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_ERROR)
        except OSError as e:
            click.echo(f"error: {e.filename or ''}: {e.strerror}", err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(code or EXIT_OK)

    return wrapper


def run_session(files, include) -> tuple[Session, list[UnitAnalysis]]:
    session = Session(files, include)
    session.parse()
    for source in session.sources:
        for message in source.diagnostics:
            click.echo(f"warning: {message}", err=True)
    analyses = session.run()
    for note in session.notes:
        click.echo(note, err=True)
    return session, analyses


def report_inconsistent(analyses: list[UnitAnalysis]) -> bool:
    """Print diagnostics for inconsistent units; True when there were any."""
    failed = [inconsistency_diagnostic(a) for a in analyses if not a.ok]
    if failed:
        click.echo(render_all(failed))
    return bool(failed)


def analyses_by_file(session: Session, analyses: list[UnitAnalysis]) -> list[tuple[str, list[UnitAnalysis]]]:
    grouped = group_by_file(analyses)
    return [(source.path, grouped.get(source.path, [])) for source in session.sources]


files_argument = click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
include_option = click.option(
    "--include",
    "-I",
    multiple=True,
    type=click.Path(file_okay=False),
    help="Directory searched for .fsmod summaries and module sources; repeatable",
)


# ============================================================================
# CLI
# ============================================================================
@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress at INFO level")
@click.option("--debug", is_flag=True, help="Log everything at DEBUG level")
@click.option("--dump-matrices", is_flag=True, help="Log every solver matrix at DEBUG level")
def cli(verbose, debug, dump_matrices):
    """Static units-of-measure analysis for Fortran."""
    try:
        Config.validate()
    except ValueError as e:
        click.echo(f"error: configuration: {e}", err=True)
        sys.exit(EXIT_ERROR)
    if dump_matrices:
        Config.DUMP_MATRICES = True
    configure_logging(verbose, debug or dump_matrices)


@cli.command()
@files_argument
@include_option
@handle_errors
def infer(files, include):
    """Print the inferred unit of every variable."""
    session, analyses = run_session(files, include)
    for path, members in analyses_by_file(session, analyses):
        for line in infer_report(path, [a for a in members if a.ok]):
            click.echo(line)
    return EXIT_INCONSISTENT if report_inconsistent(analyses) else EXIT_OK


@cli.command()
@files_argument
@include_option
@handle_errors
def check(files, include):
    """Check annotations for consistency; silent on success."""
    _, analyses = run_session(files, include)
    return EXIT_INCONSISTENT if report_inconsistent(analyses) else EXIT_OK


@cli.command()
@files_argument
@include_option
@handle_errors
def suggest(files, include):
    """List the declarations whose annotation would determine every unit."""
    session, analyses = run_session(files, include)
    if report_inconsistent(analyses):
        return EXIT_INCONSISTENT
    for path, members in analyses_by_file(session, analyses):
        for line in suggest_report(path, members):
            click.echo(line)
    return EXIT_OK


@cli.command()
@files_argument
@include_option
@click.option("--out", "-o", type=click.Path(), help="Output file, or directory when several files are given")
@handle_errors
def synth(files, include, out):
    """Rewrite sources with inferred `!= unit` annotations."""
    session, analyses = run_session(files, include)
    if report_inconsistent(analyses):
        return EXIT_INCONSISTENT
    grouped = analyses_by_file(session, analyses)
    for path, members in grouped:
        text = synthesise_file(path, members)
        if out is None:
            click.echo(text, nl=False)
            continue
        target = os.path.join(out, os.path.basename(path)) if len(grouped) > 1 or os.path.isdir(out) else out
        atomic_write_text(target, text)
        logger.info(f"[SYNTH] wrote {target}")
    return EXIT_OK


@cli.command(name="compile")
@files_argument
@include_option
@click.option(
    "--out", "-o", type=click.Path(file_okay=False), help="Directory for .fsmod files (default: beside the source)"
)
@handle_errors
def compile_(files, include, out):
    """Write one .fsmod summary per module."""
    for path in files:
        click.echo(f"Compiling units for '{path}'")
    session, analyses = run_session(files, include)
    if report_inconsistent(analyses):
        return EXIT_INCONSISTENT
    for analysis in analyses:
        if analysis.unit.kind != MODULE:
            logger.info(f"[FSMOD] skipping {analysis.unit.kind} '{analysis.unit.name}': only modules are compiled")
            continue
        summary = compile_module(analysis.entry, analysis.result.solution)
        write_summary(summary, out or os.path.dirname(analysis.path) or ".")
    return EXIT_OK


@cli.command(name="generate")
@click.option("-n", "count", type=int, default=5, show_default=True, help="Number of functions")
@click.option("-l", "length", type=int, default=5, show_default=True, help="Length of each function")
@click.option("-a", "arity", type=int, default=2, show_default=True, help="Arguments per function")
@click.option("--fmt", type=click.Choice(FORMATS), default=MULTIPLE, show_default=True, help="File layout")
@click.option("--out", "-o", type=click.Path(file_okay=False), default=".", show_default=True)
@handle_errors
def generate_(count, length, arity, fmt, out):
    """Write a synthetic polymorphic corpus."""
    try:
        params = GeneratorParams(count, length, arity, fmt).validate()
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_ERROR
    for path in generate(params, out):
        click.echo(path)
    return EXIT_OK


if __name__ == "__main__":
    cli()
