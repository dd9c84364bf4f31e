"""Command line: ``divisor-workbench validate|run|paper-suite|schema``.

Exit status is 0 when every check passes, 1 when at least one check fails
or errors, and 2 when the input cannot be parsed or the arguments are bad.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .battery import N_MAX, N_MIN, paper_suite
from .report import Report
from .runner import run_suite
from .scenario import ScenarioError, parse_scenario, schema

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2

_format = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
                       show_default=True, help="Report format.")
_workers = click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                        help="Evaluate checks on this many threads.")


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        click.echo(f"{path}: cannot read: {exc.strerror}", err=True)
        sys.exit(EXIT_PARSE)
    try:
        return parse_scenario(data)
    except ScenarioError as exc:
        for issue in exc.issues:
            click.echo(f"{path}: {issue}", err=True)
        sys.exit(EXIT_PARSE)


def _emit(report: Report, fmt: str) -> None:
    click.echo(report.dumps() if fmt == "json" else report.to_text(), nl=False)
    sys.exit(EXIT_OK if report.ok else EXIT_FAIL)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main() -> None:
    """Exact intersection-theory checks for surfaces and twistor threefolds."""


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
def validate(file: str) -> None:
    """Parse FILE and report problems without running any check."""
    s = _load(file)
    click.echo(f"{file}: ok ({len(s.objects)} objects, {len(s.checks)} checks)")


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@_format
@_workers
def run(file: str, fmt: str, workers: int) -> None:
    """Run every check in scenario FILE."""
    _emit(run_suite(_load(file), title=file, workers=workers), fmt)


@main.command("paper-suite")
@click.option("--n-min", type=click.IntRange(min=5), default=N_MIN, show_default=True)
@click.option("--n-max", type=click.IntRange(min=5), default=N_MAX, show_default=True)
@_format
@_workers
def paper_suite_cmd(n_min: int, n_max: int, fmt: str, workers: int) -> None:
    """Run the built-in battery for n-min <= n <= n-max plus the K3 case."""
    if n_max < n_min:
        raise click.BadParameter(f"--n-max {n_max} is below --n-min {n_min}", param_hint="--n-max")
    _emit(paper_suite(n_min, n_max, workers=workers), fmt)


@main.command("schema")
def schema_cmd() -> None:
    """Print the JSON schema of scenario files."""
    click.echo(json.dumps(schema(), indent=2))


if __name__ == "__main__":  # pragma: no cover
    main()
