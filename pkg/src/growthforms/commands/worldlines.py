"""Worldlines command."""

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from growthforms.exceptions import GrowthFormsError
from growthforms.reporting import format_float
from growthforms.runner import apply_flags, compute_worldlines, emit_worldlines, load_scenario

console = Console()


def worldlines_command(
    ctx: typer.Context,
    scenario: str | None = typer.Option(None, "--scenario", "-s", help="Scenario name"),
    ode_step: float | None = typer.Option(None, "--ode-step", help="RK4 step size"),
    seed: int | None = typer.Option(None, "--seed", help="RNG seed"),
    out_dir: Path | None = typer.Option(None, "--out-dir", "-o", help="Output directory"),
    param: list[str] = typer.Option([], "--param", "-p", help="Scenario parameter override key=value (repeatable)"),
    parameterization: str | None = typer.Option(
        None,
        "--parameterization",
        help="Integrate the kinematic flux ('flux') or its time-normalised frame ('time')",
    ),
) -> None:
    """Integrate worldlines of the kinematic flux and write CSV tracks and an SVG plot."""
    try:
        config = apply_flags(ctx.obj["config"], param, scenario=scenario, ode_step=ode_step, seed=seed, out_dir=out_dir)
        if parameterization is not None:
            config = config.with_overrides({"ode.parameterization": parameterization})
        model = load_scenario(config)
        worldlines = compute_worldlines(config, model)
        written = emit_worldlines(config, model, worldlines)
    except GrowthFormsError as e:
        console.print(f"[red]Error: {e.message}[/red]")
        raise typer.Exit(e.exit_code)

    if not worldlines:
        console.print(f"[yellow]No seeds for {model.name}; nothing written[/yellow]")
        return

    table = Table(title=f"Worldlines: {model.name}")
    table.add_column("#", style="cyan")
    table.add_column("Seed", style="green")
    table.add_column("Steps", justify="right")
    table.add_column("Status", style="magenta")
    table.add_column("End", style="blue")
    for i, wl in enumerate(worldlines):
        table.add_row(
            str(i),
            ", ".join(format(c, ".4g") for c in wl.seed),
            str(len(wl) - 1),
            wl.status.value,
            ", ".join(format_float(c) for c in wl.end),
        )
    console.print(table)
    for path in written:
        console.print(f"[dim]wrote {path}[/dim]")
