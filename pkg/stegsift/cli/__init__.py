"""CLI module for StegSift."""

from stegsift.cli.app import app, main

__all__ = ["app", "main"]
