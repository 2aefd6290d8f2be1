"""Main CLI entry point using Typer."""

from __future__ import annotations

from pathlib import Path

import typer
from rich.console import Console

from growthforms import __version__
from growthforms.commands import balance as balance_cmd
from growthforms.commands import config as config_cmd
from growthforms.commands import currents as currents_cmd
from growthforms.commands import scenarios as scenarios_cmd
from growthforms.commands import worldlines as worldlines_cmd
from growthforms.config import load_config
from growthforms.constants import APP_NAME
from growthforms.exceptions import GrowthFormsError
from growthforms.logger import get_logger, setup_logging

app = typer.Typer(
    name=APP_NAME,
    help="Exterior calculus of volumetric and surface growth: worldlines, balance laws and currents",
    no_args_is_help=True,
    rich_markup_mode="rich",
    context_settings={"help_option_names": ["-h", "--help"]},
)

console = Console()
logger = get_logger(__name__)


def version_callback(value: bool) -> None:
    """Show version and exit."""
    if value:
        console.print(f"{APP_NAME} version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    config: Path | None = typer.Option(
        None,
        "--config",
        "-c",
        help="Path to a JSON configuration file",
        exists=True,
        readable=True,
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Enable verbose output",
    ),
    version: bool = typer.Option(
        False,
        "--version",
        "-V",
        help="Show version and exit",
        callback=version_callback,
        is_eager=True,
    ),
) -> None:
    """growthforms - balance laws of growing bodies as differential forms and currents."""
    try:
        cfg = load_config(config)
    except GrowthFormsError as e:
        console.print(f"[red]Error: {e.message}[/red]")
        raise typer.Exit(e.exit_code)

    if verbose:
        cfg.logging.level = "DEBUG"
    setup_logging(cfg.logging)
    logger.debug("configuration loaded", scenario=cfg.scenario, source=str(config) if config else "defaults")

    ctx.ensure_object(dict)
    ctx.obj["config"] = cfg


app.add_typer(config_cmd.app, name="config", help="Configuration management")

app.command("worldlines")(worldlines_cmd.worldlines_command)
app.command("balance")(balance_cmd.balance_command)
app.command("currents")(currents_cmd.currents_command)
app.command("scenarios")(scenarios_cmd.scenarios_command)


if __name__ == "__main__":
    app()
