"""growthforms CLI entry point."""

from growthforms.cli import app

if __name__ == "__main__":
    app()
