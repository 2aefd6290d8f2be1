"""Scenarios command."""

import typer
from rich.console import Console
from rich.table import Table

from growthforms.exceptions import GrowthFormsError
from growthforms.runner import apply_flags
from growthforms.scenarios import build_scenario, list_scenarios

console = Console()


def scenarios_command(
    ctx: typer.Context,
    name: str | None = typer.Argument(None, help="Show the expected facts of one scenario"),
    param: list[str] = typer.Option([], "--param", "-p", help="Scenario parameter override key=value (repeatable)"),
    check: bool = typer.Option(False, "--check", help="Evaluate the expected facts numerically"),
) -> None:
    """List the built-in scenarios, or the expected facts of one of them."""
    try:
        config = apply_flags(ctx.obj["config"], param)
        if name is None:
            models = list_scenarios(config.params)
        else:
            config = apply_flags(config, scenario=name)
            models = [build_scenario(config.scenario, config.params)]
    except GrowthFormsError as e:
        console.print(f"[red]Error: {e.message}[/red]")
        raise typer.Exit(e.exit_code)

    if name is None:
        table = Table(title="Scenarios")
        table.add_column("Name", style="cyan")
        table.add_column("Space", style="green")
        table.add_column("Seeds", justify="right")
        table.add_column("Description")
        for model in models:
            table.add_row(model.name, ", ".join(model.spacetime.space.labels), str(len(model.seeds)), model.description)
        console.print(table)
        return

    model = models[0]
    table = Table(title=f"Expected facts: {model.name}")
    table.add_column("Fact", style="cyan")
    table.add_column("Expected", justify="right")
    table.add_column("Tolerance", justify="right")
    if check:
        table.add_column("Actual", justify="right")
        table.add_column("Result")
    table.add_column("Description")

    failed = False
    for fact in model.facts:
        row = [fact.name, f"{fact.expected:.10g}", f"{fact.tolerance:.0e}"]
        if check:
            actual, ok = fact.check()
            failed = failed or not ok
            row += [f"{actual:.10g}", "[green]pass[/green]" if ok else "[red]FAIL[/red]"]
        table.add_row(*row, fact.description)
    console.print(table)

    if failed:
        raise typer.Exit(1)
