"""Configuration management commands."""

from pathlib import Path

import typer
import yaml
from rich.console import Console
from rich.syntax import Syntax

from growthforms.config import RunConfig
from growthforms.constants import DEFAULT_USER_CONFIG_DIR

app = typer.Typer(help="Configuration management commands")
console = Console()


@app.command("init")
def init_command(
    path: Path | None = typer.Option(
        None,
        "--path",
        "-p",
        help="Where to write the configuration (default: user config directory)",
    ),
    force: bool = typer.Option(
        False,
        "--force",
        "-f",
        help="Overwrite existing configuration",
    ),
) -> None:
    """Write a configuration file holding every default."""
    config_path = path or DEFAULT_USER_CONFIG_DIR / "config.json"

    if config_path.exists() and not force:
        console.print(f"[yellow]Configuration already exists at {config_path}[/yellow]")
        console.print("Use --force to overwrite")
        raise typer.Exit(1)

    RunConfig().to_file(config_path)
    console.print(f"[green]Created configuration at {config_path}[/green]")


@app.command("show")
def show_command(
    ctx: typer.Context,
    as_json: bool = typer.Option(False, "--json", help="Print JSON instead of YAML"),
) -> None:
    """Display current configuration."""
    config: RunConfig = ctx.obj["config"]

    if as_json:
        text, lexer = config.model_dump_json(indent=2), "json"
    else:
        text, lexer = yaml.safe_dump(config.model_dump(mode="json"), default_flow_style=False, sort_keys=False), "yaml"

    console.print(Syntax(text, lexer, theme="monokai", line_numbers=True))
