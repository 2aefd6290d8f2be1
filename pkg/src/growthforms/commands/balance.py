"""Balance command."""

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from growthforms.exceptions import GrowthFormsError
from growthforms.runner import apply_flags, compute_balance, load_scenario, write_report

console = Console()


def _verdict(ok: bool) -> str:
    return "[green]pass[/green]" if ok else "[red]FAIL[/red]"


def balance_command(
    ctx: typer.Context,
    scenario: str | None = typer.Option(None, "--scenario", "-s", help="Scenario name"),
    quad_order: int | None = typer.Option(None, "--quad-order", help="Gauss points per axis"),
    subcells: int | None = typer.Option(None, "--subcells", help="Subcells per parameter axis"),
    seed: int | None = typer.Option(None, "--seed", help="RNG seed for the sample points"),
    samples: int | None = typer.Option(None, "--samples", help="Number of random sample points"),
    out_dir: Path | None = typer.Option(None, "--out-dir", "-o", help="Output directory"),
    param: list[str] = typer.Option([], "--param", "-p", help="Scenario parameter override key=value (repeatable)"),
    perturb_source: float | None = typer.Option(
        None,
        "--perturb-source",
        help="Add this multiple of the coordinate volume form to the source",
    ),
) -> None:
    """Check the differential and integral balance laws of a scenario."""
    try:
        config = apply_flags(
            ctx.obj["config"],
            param,
            scenario=scenario,
            quad_order=quad_order,
            subcells=subcells,
            seed=seed,
            samples=samples,
            out_dir=out_dir,
            perturb_source=perturb_source,
        )
        model = load_scenario(config)
        summary = compute_balance(config, model)
        path = write_report(config, f"{model.name}_balance.json", summary.to_dict())
    except GrowthFormsError as e:
        console.print(f"[red]Error: {e.message}[/red]")
        raise typer.Exit(e.exit_code)

    table = Table(title=f"Balance: {model.name}")
    table.add_column("Check", style="cyan")
    table.add_column("Max residual", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Result")
    tol = summary.pointwise_tolerance
    table.add_row("beta + dJ = sigma", f"{summary.spatial.max_residual:.3e}", f"{tol:.0e}", _verdict(summary.spatial.passed(tol)))
    table.add_row("d Jst = s", f"{summary.spacetime.max_residual:.3e}", f"{tol:.0e}", _verdict(summary.spacetime.passed(tol)))
    if summary.region_defect is not None:
        qtol = summary.quadrature_tolerance
        table.add_row(
            f"region at t = {summary.region_time:g}",
            f"{summary.region_defect:.3e}",
            f"{qtol:.0e}",
            _verdict(summary.region_defect < qtol),
        )
    console.print(table)
    if path:
        console.print(f"[dim]wrote {path}[/dim]")

    if not summary.passed:
        raise typer.Exit(1)
