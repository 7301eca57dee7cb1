"""Command-line interface: evaluate, sweep, correct, serve.

Exit codes: 0 on success, 2 when the scenario fails validation, 3 on runtime
failure. Validation failures are emitted as machine-readable JSON on stderr.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .engine import (
    SWEEP_PARAMETERS,
    report_json,
    report_table,
    run_correct,
    run_evaluate,
    run_sweep,
    sweep_table,
)
from .scenario import Scenario, ScenarioError, parse_scenario

EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _emit_errors(issues: list[dict]) -> None:
    click.echo(json.dumps({"errors": issues}), err=True)


def _load(path: str, seed: int | None, replicates: int | None) -> Scenario:
    scenario = parse_scenario(Path(path))
    if seed is not None or replicates is not None:
        data = scenario.model_dump(by_alias=True, exclude_none=True)
        if seed is not None:
            data.setdefault("mc", {})["seed"] = seed
        if replicates is not None:
            data.setdefault("mc", {})["replicates"] = replicates
        scenario = parse_scenario(data)
    return scenario


def _write(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _run(action, out: str | None) -> None:
    try:
        text = action()
    except ScenarioError as err:
        _emit_errors(err.issues)
        sys.exit(EXIT_VALIDATION)
    except Exception as err:  # noqa: BLE001 - boundary: map to exit code contract
        _emit_errors([{"path": "", "message": f"{type(err).__name__}: {err}"}])
        sys.exit(EXIT_RUNTIME)
    _write(text, out)


def _common_options(fn):
    fn = click.option("--seed", type=int, default=None, help="Override mc.seed.")(fn)
    fn = click.option(
        "--replicates", type=int, default=None, help="Override mc.replicates."
    )(fn)
    fn = click.option(
        "--format",
        "fmt",
        type=click.Choice(["structured", "table"]),
        default="structured",
        show_default=True,
        help="structured = JSON report, table = per-principle CSV.",
    )(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None)(fn)
    return fn


@click.group()
@click.version_option(package_name="audiencefit")
def main():
    """Analyst-audience matching: evaluate, sweep, and plan scenarios."""


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@_common_options
def evaluate(scenario_file, seed, replicates, fmt, out):
    """Evaluate SCENARIO_FILE and report distances, flags and probabilities."""

    def action():
        report = run_evaluate(_load(scenario_file, seed, replicates))
        return report_json(report) if fmt == "structured" else report_table(report)

    _run(action, out)


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--param",
    "parameter",
    type=click.Choice(SWEEP_PARAMETERS),
    required=True,
    help="Scenario knob to vary.",
)
@click.option(
    "--grid",
    required=True,
    help="Comma-separated ascending values, e.g. 0.1,1,10.",
)
@_common_options
def sweep(scenario_file, parameter, grid, seed, replicates, fmt, out):
    """Evaluate SCENARIO_FILE once per grid value of the chosen parameter."""

    def action():
        try:
            values = [float(v) for v in grid.split(",") if v.strip()]
        except ValueError:
            raise ScenarioError.single("", f"grid values must be numbers, got {grid!r}") from None
        result = run_sweep(_load(scenario_file, seed, replicates), parameter, values)
        return report_json(result) if fmt == "structured" else sweep_table(result)

    _run(action, out)


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@_common_options
def correct(scenario_file, seed, replicates, fmt, out):
    """Apply SCENARIO_FILE's correction plan, then re-evaluate."""

    def action():
        report = run_correct(_load(scenario_file, seed, replicates))
        return report_json(report) if fmt == "structured" else report_table(report)

    _run(action, out)


@main.command()
@click.option(
    "--port",
    type=int,
    default=None,
    help="Port to bind; defaults to AUDIENCEFIT_PORT or 8000.",
    envvar="AUDIENCEFIT_PORT",
)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, host):
    """Run the HTTP planning service (and the bundled UI, if built)."""
    import uvicorn

    from .service import create_app

    port = 8000 if port is None else port
    uvicorn.run(create_app(port=port), host=host, port=port)


if __name__ == "__main__":
    main()
