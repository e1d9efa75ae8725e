"""Command-line front end."""

from src.cli.app import run

__all__ = ["run"]
