"""CLI interface for Concord"""

import logging
from pathlib import Path
from typing import Optional

import click

from concord.application.bound_service import BoundService
from concord.application.graph_analysis_service import GraphAnalysisService
from concord.application.scenario_runner import ScenarioRunner
from concord.application.simulation_service import SimulationDivergedError, SimulationService
from concord.infrastructure.builtins import builtin_descriptions
from concord.infrastructure.config.config_manager import ConfigManager
from concord.infrastructure.scenario_io import (
    builtin_scenario,
    dump_scenario,
    load_graph,
    load_scenario,
)
from concord.infrastructure.writers import json_text, write_json, write_text, write_trajectory_csv

logger = logging.getLogger(__name__)

# Exit status of a simulation whose state became non-finite
EXIT_DIVERGED = 3


class DivergenceError(click.ClickException):
    """Simulation diverged; reported distinctly from non-convergence"""

    exit_code = EXIT_DIVERGED


def setup_logging(verbose: bool = False) -> None:
    """Setup logging configuration"""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )
    logging.getLogger().setLevel(level)
    for logger_name in logging.Logger.manager.loggerDict:
        logging.getLogger(logger_name).setLevel(level)


def _die(message: str, verbose: bool = False, exc: Optional[Exception] = None) -> None:
    """Exit with a user-friendly error message"""
    if exc is not None:
        logger.error(message, exc_info=verbose)
    else:
        logger.error(message)
    raise click.ClickException(message)


def _config(ctx) -> ConfigManager:
    return ConfigManager(config_path=ctx.obj.get("config_path"))


def _emit(data: dict, out: Optional[Path], indent: int) -> None:
    """Write a JSON report to a file, or print it when no file is given"""
    if out is not None:
        write_json(data, out, indent)
    else:
        click.echo(json_text(data, indent), nl=False)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.option(
    "--config",
    type=click.Path(exists=True, path_type=Path),
    help="Path to .concord.yml config file",
)
@click.pass_context
def cli(ctx, verbose: bool, config: Path):
    """Concord - finite-time consensus simulation and analysis"""
    ctx.ensure_object(dict)
    setup_logging(verbose)
    ctx.obj["config_path"] = config
    ctx.obj["verbose"] = verbose


@cli.command()
@click.option(
    "--scenario", "scenario_ref", required=True, help="Scenario file or builtin:NAME"
)
@click.option("--out", type=click.Path(path_type=Path), help="Trajectory CSV path")
@click.option(
    "--diag",
    type=click.Path(path_type=Path),
    help="Diagnostics JSON path (printed to stdout if omitted)",
)
@click.pass_context
def simulate(ctx, scenario_ref: str, out: Optional[Path], diag: Optional[Path]):
    """Integrate a scenario and write its trajectory and diagnostics."""
    verbose = ctx.obj.get("verbose", False)

    try:
        config_manager = _config(ctx)
        scenario = load_scenario(scenario_ref, config_manager.get_integrator_config())
        service = SimulationService(config_manager.get_numerics_config())
        traj = service.run(scenario)

        if out is not None:
            write_trajectory_csv(traj, out)
        diagnostics = {"scenario": scenario.name, **traj.diagnostics()}
        _emit(diagnostics, diag, config_manager.get_output_config().json_indent)
        if not traj.converged:
            logger.warning(f"Scenario '{scenario.name}' did not converge by t_max")

    except click.ClickException:
        raise
    except SimulationDivergedError as e:
        logger.error(f"Simulation diverged: {e}")
        raise DivergenceError(f"Simulation diverged: {e}") from e
    except Exception as e:
        _die(f"Fatal error: {e}", verbose=verbose, exc=e)


@cli.command()
@click.option(
    "--graph",
    "graph_path",
    type=click.Path(exists=True, path_type=Path),
    help="Graph JSON file",
)
@click.option("--scenario", "scenario_ref", help="Scenario file or builtin:NAME")
@click.option("--segment", type=int, default=1, show_default=True, help="1-based segment")
@click.option("--alpha0", type=float, help="Largest exponent, for exponent-graph connectivity")
@click.option("--out", type=click.Path(path_type=Path), help="Report JSON path")
@click.pass_context
def analyze(
    ctx,
    graph_path: Optional[Path],
    scenario_ref: Optional[str],
    segment: int,
    alpha0: Optional[float],
    out: Optional[Path],
):
    """Report structure and spectrum of a topology."""
    verbose = ctx.obj.get("verbose", False)
    if (graph_path is None) == (scenario_ref is None):
        raise click.UsageError("Give exactly one of --graph and --scenario")

    try:
        config_manager = _config(ctx)
        service = GraphAnalysisService(config_manager.get_numerics_config())
        if graph_path is not None:
            report = service.analyze(load_graph(graph_path), alpha0)
        else:
            scenario = load_scenario(scenario_ref, config_manager.get_integrator_config())
            report = service.analyze_scenario(scenario, segment)
        _emit(report, out, config_manager.get_output_config().json_indent)

    except click.ClickException:
        raise
    except Exception as e:
        _die(f"Fatal error: {e}", verbose=verbose, exc=e)


@cli.command()
@click.option(
    "--scenario", "scenario_ref", required=True, help="Scenario file or builtin:NAME"
)
@click.option("--out", type=click.Path(path_type=Path), help="Bound report JSON path")
@click.pass_context
def bound(ctx, scenario_ref: str, out: Optional[Path]):
    """Compute the convergence-time bound report of a scenario."""
    verbose = ctx.obj.get("verbose", False)

    try:
        config_manager = _config(ctx)
        scenario = load_scenario(scenario_ref, config_manager.get_integrator_config())
        service = BoundService(
            config_manager.get_numerics_config(), config_manager.get_output_config()
        )
        report = service.report(scenario)
        _emit(report.to_dict(), out, config_manager.get_output_config().json_indent)

    except click.ClickException:
        raise
    except Exception as e:
        _die(f"Fatal error: {e}", verbose=verbose, exc=e)


@cli.command()
@click.argument("name", type=str)
@click.option("--out", type=click.Path(path_type=Path), help="Scenario JSON path")
@click.pass_context
def builtin(ctx, name: str, out: Optional[Path]):
    """Export a built-in scenario as a JSON document.

    NAME: Built-in scenario name (see list-builtins)
    """
    verbose = ctx.obj.get("verbose", False)

    try:
        config_manager = _config(ctx)
        scenario = builtin_scenario(name, config_manager.get_integrator_config())
        text = dump_scenario(scenario, config_manager.get_output_config().json_indent)
        if out is not None:
            write_text(out, text)
        else:
            click.echo(text, nl=False)

    except click.ClickException:
        raise
    except Exception as e:
        _die(f"Fatal error: {e}", verbose=verbose, exc=e)


@cli.command("list-builtins")
def list_builtins():
    """List the built-in scenarios."""
    for name, description in builtin_descriptions().items():
        click.echo(f"{name}: {description}")


@cli.command()
@click.option(
    "--scenario",
    "scenario_refs",
    multiple=True,
    required=True,
    help="Scenario file or builtin:NAME (repeatable)",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory receiving one subdirectory per scenario",
)
@click.option("--jobs", type=click.IntRange(1, 16), help="Concurrent scenarios. Overrides config.")
@click.pass_context
def batch(ctx, scenario_refs: tuple[str, ...], out_dir: Path, jobs: Optional[int]):
    """Run several scenarios with isolated outputs."""
    verbose = ctx.obj.get("verbose", False)

    try:
        config_manager = _config(ctx)
        defaults = config_manager.get_integrator_config()
        numerics = config_manager.get_numerics_config()
        output_config = config_manager.get_output_config()
        scenarios = [load_scenario(ref, defaults) for ref in scenario_refs]

        runner = ScenarioRunner(
            simulation_service=SimulationService(numerics),
            bound_service=BoundService(numerics, output_config),
            max_workers=jobs or config_manager.get_batch_config().max_workers,
            json_indent=output_config.json_indent,
        )
        outcomes = runner.run_batch(scenarios, out_dir)
        write_json(
            {"runs": [o.to_dict() for o in outcomes]},
            out_dir / "summary.json",
            output_config.json_indent,
        )

        for outcome in outcomes:
            state = "converged" if outcome.converged else "not converged"
            if not outcome.is_successful:
                state = f"{outcome.status}: {outcome.error}"
            click.echo(f"{outcome.index:02d} {outcome.name}: {state}")

        failed = [o for o in outcomes if not o.is_successful]
        if failed:
            _die(f"{len(failed)} of {len(outcomes)} scenarios failed", verbose=verbose)

    except click.ClickException:
        raise
    except Exception as e:
        _die(f"Fatal error: {e}", verbose=verbose, exc=e)


def main():
    """Main entry point"""
    cli(obj={})


if __name__ == "__main__":
    main()
