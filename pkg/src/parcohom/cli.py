"""Command-line front end: ``parcohom run | fixtures | kodaira``."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .datasets import load_dataset, validate_fixtures
from .jobs import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, canonical, dumps, run_job


def _cell(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    return "-" if v is None else str(v)


def render_table(report: dict) -> str:
    """Aligned two-column text view of the scalar parts of a report."""
    if "error" in report:
        return f"error: {report['error']}"
    rows: list[tuple[str, str]] = [("kind", report["kind"]), ("job", report["job_hash"][:16])]
    result = report["result"]

    def walk(prefix: str, obj) -> None:
        for key in sorted(obj):
            val = obj[key]
            name = f"{prefix}{key}"
            if isinstance(val, dict):
                walk(name + ".", val)
            elif key in ("gram", "matrices", "monodromy", "charpolys", "rows"):
                continue
            else:
                rows.append((name, _cell(canonical(val))))

    walk("", result)
    if "check" in report:
        rows.append(("check", "pass" if report["check"]["passed"] else "FAIL"))
        rows += [("", m) for m in report["check"]["mismatches"]]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _emit(report: dict, fmt: str) -> None:
    # in table mode errors go to stderr only
    if fmt == "table":
        if "error" not in report:
            click.echo(render_table(report))
    else:
        click.echo(dumps(report), nl=False)


@click.group()
@click.version_option(__version__, prog_name="parcohom")
def main() -> None:
    """Parabolic cohomology of integral local systems on the punctured sphere."""


@main.command()
@click.argument("job_file", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default=None,
              help="Output format; defaults to the job's option or json.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON report here as well.")
def run(job_file: str, fmt: str | None, output: str | None) -> None:
    """Run a job file and print its report."""
    try:
        job = json.loads(Path(job_file).read_text())
    except OSError as exc:
        click.echo(f"error: cannot read {job_file}: {exc.strerror}", err=True)
        sys.exit(EXIT_USAGE)
    except json.JSONDecodeError as exc:
        click.echo(f"error: {job_file} line {exc.lineno} column {exc.colno}: {exc.msg}", err=True)
        sys.exit(EXIT_USAGE)
    outcome = run_job(job)
    if fmt is None:
        opts = job.get("options") if isinstance(job, dict) else None
        fmt = opts.get("format", "json") if isinstance(opts, dict) else "json"
        fmt = fmt if fmt in ("json", "table") else "json"
    if output:
        Path(output).write_text(outcome.to_json())
    _emit(outcome.report, fmt)
    if outcome.error:
        click.echo(f"error: {outcome.error}", err=True)
    sys.exit(outcome.exit_code)


@main.command()
@click.option("--filter", "pattern", default=None, help="Glob on fixture ids, e.g. 'appendix-*'.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table")
@click.option("--workers", type=int, default=1, show_default=True)
def fixtures(pattern: str | None, fmt: str, workers: int) -> None:
    """Run dataset fixtures and printed-data self-checks."""
    summary = validate_fixtures(pattern, load_dataset(), workers)
    if fmt == "table":
        click.echo(summary.table())
    else:
        click.echo(dumps({"version": __version__, **summary.to_json()}), nl=False)
    sys.exit(EXIT_OK if summary.passed else EXIT_MISMATCH)


@main.command()
@click.option("--orders", required=True, help="Vanishing orders of g2, g3 and the discriminant, e.g. 0,0,5.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table")
def kodaira(orders: str, fmt: str) -> None:
    """Classify a fibre from its vanishing orders."""
    try:
        values = [int(x) for x in orders.split(",")]
    except ValueError:
        click.echo(f"error: --orders expects three integers, got {orders!r}", err=True)
        sys.exit(EXIT_USAGE)
    outcome = run_job({"kind": "kodaira", "payload": {"orders": values}})
    if fmt == "table" and outcome.error is None:
        r = outcome.report["result"]
        m = r["monodromy"]
        click.echo(f"type      {r['type']}\neuler     {r['euler']}\nmonodromy {m.tolist()}")
    else:
        _emit(outcome.report, fmt)
    if outcome.error is not None:
        click.echo(f"error: {outcome.error}", err=True)
    sys.exit(outcome.exit_code)


if __name__ == "__main__":
    main()
