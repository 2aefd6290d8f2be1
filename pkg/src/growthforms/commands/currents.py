"""Currents command."""

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from growthforms.exceptions import GrowthFormsError
from growthforms.runner import (
    apply_flags,
    compute_currents,
    compute_interior_sources,
    currents_payload,
    load_scenario,
    write_report,
)

console = Console()


def currents_command(
    ctx: typer.Context,
    scenario: str | None = typer.Option(None, "--scenario", "-s", help="Scenario name"),
    bumps: int | None = typer.Option(None, "--bumps", "-n", help="Number of bump test forms"),
    quad_order: int | None = typer.Option(None, "--quad-order", help="Gauss points per axis"),
    subcells: int | None = typer.Option(None, "--subcells", help="Subcells per parameter axis"),
    seed: int | None = typer.Option(None, "--seed", help="RNG seed for bump placement"),
    out_dir: Path | None = typer.Option(None, "--out-dir", "-o", help="Output directory"),
    param: list[str] = typer.Option([], "--param", "-p", help="Scenario parameter override key=value (repeatable)"),
    shortcut: bool = typer.Option(False, "--shortcut", help="Use the closed-form boundary of the flux current"),
) -> None:
    """Check the singular balance law bd T = S against bump test forms."""
    try:
        config = apply_flags(
            ctx.obj["config"],
            param,
            scenario=scenario,
            bumps=bumps,
            quad_order=quad_order,
            subcells=subcells,
            seed=seed,
            out_dir=out_dir,
        )
        model = load_scenario(config)
        report = compute_currents(config, model, shortcut)
        interior = compute_interior_sources(config, model, shortcut)
        payload = currents_payload(config, model, report, interior)
        path = write_report(config, f"{model.name}_currents.json", payload)
    except GrowthFormsError as e:
        console.print(f"[red]Error: {e.message}[/red]")
        raise typer.Exit(e.exit_code)

    table = Table(title=f"Currents: {model.name} ({report.convention} sign)")
    table.add_column("#", style="cyan")
    table.add_column("Center", style="green")
    table.add_column("bd T(phi)", justify="right")
    table.add_column("S(phi)", justify="right")
    table.add_column("Defect", justify="right", style="magenta")
    for i, test in enumerate(report.tests):
        table.add_row(
            str(i),
            ", ".join(format(c, ".3f") for c in test.center),
            f"{test.lhs:.6e}",
            f"{test.rhs:.6e}",
            f"{test.defect:.2e}",
        )
    console.print(table)
    if report.vacuous:
        console.print("[yellow]No test forms: the check is vacuous[/yellow]")
    console.print(f"max defect {report.max_defect:.3e} (tolerance {config.tolerances.current:.0e})")
    if interior:
        console.print(
            f"interior bumps: max |bd T(phi)| {max(interior):.3e} (tolerance {config.tolerances.interior:.0e})"
        )
    if path:
        console.print(f"[dim]wrote {path}[/dim]")

    if not payload["passed"]:
        raise typer.Exit(1)
