"""Logging configuration with structlog and standard library."""

import json
import logging
from logging.handlers import RotatingFileHandler
from typing import Any

import structlog
from rich.console import Console
from rich.logging import RichHandler

from growthforms.config import LoggingConfig

# Reports go to stdout; diagnostics stay on stderr.
console = Console(stderr=True)


def setup_logging(config: LoggingConfig) -> None:
    """Configure logging with both structlog and standard library."""
    level = getattr(logging, config.level.upper())
    handlers: list[logging.Handler] = []

    rich_handler = RichHandler(
        console=console,
        rich_tracebacks=True,
        show_path=False,
    )
    rich_handler.setLevel(level)
    handlers.append(rich_handler)

    if config.log_file:
        try:
            config.log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                config.log_file,
                maxBytes=parse_size(config.max_size),
                backupCount=config.backup_count,
            )
            file_handler.setLevel(logging.DEBUG)
            handlers.append(file_handler)
        except OSError:
            console.print(f"[dim yellow]Warning: cannot write to {config.log_file}. Logging to console only.[/dim yellow]")

    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=handlers,
        force=True,
    )

    shared_processors: list[Any] = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    renderer: Any
    if config.structured:
        renderer = structlog.processors.JSONRenderer(serializer=json.dumps)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=shared_processors + [renderer],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def parse_size(size_str: str) -> int:
    """Parse size string like '100MB' to bytes."""
    size_str = size_str.strip().upper()

    # Multi-character units first
    units = [
        ("GB", 1024**3),
        ("MB", 1024**2),
        ("KB", 1024),
        ("B", 1),
    ]

    for unit, multiplier in units:
        if size_str.endswith(unit):
            number = size_str[: -len(unit)].strip()
            try:
                return int(float(number) * multiplier)
            except ValueError:
                raise ValueError(f"Invalid size format: {size_str}")

    try:
        return int(size_str)
    except ValueError:
        raise ValueError(f"Invalid size format: {size_str}")


def get_logger(name: str | None = None) -> structlog.stdlib.BoundLogger:
    """Get a structlog logger."""
    return structlog.get_logger(name)
