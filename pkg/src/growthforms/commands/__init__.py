"""CLI commands package."""

from growthforms.commands import balance, config, currents, scenarios, worldlines

__all__ = ["balance", "config", "currents", "scenarios", "worldlines"]
