"""
Main entry point for the pictochart command-line tool.

This module exposes the click group that bundles every subcommand:
skeleton rendering, fidelity scoring, batch scoring, the attention gate
and grid assembly.

Attributes:
    cli (click.Group): The command group, also reachable with `python -m pictochart`.
"""

from pictochart.cli import cli

if __name__ == "__main__":
    cli()
