#!/usr/bin/env python
"""Command line entry point for the multisection checks."""

import click

from engine.cubulate import cubulate
from engine.handles import handles
from engine.init import init
from engine.verify import verify
from util.click_util import load_defaults
from util.log_handler import initialize_logger

# pylint: disable=no-value-for-parameter

COMMANDS = (init, verify, handles, cubulate)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", type=str, default="INFO")
@click.option("--log-file", type=str, default="multisect.log")
@click.pass_context
def cli(ctx, log_level, log_file):
    """Verify symmetric multisections of odd-dimensional tori."""
    initialize_logger(log_level=log_level.upper(), log_file=log_file)
    command = ctx.invoked_subcommand
    # init writes the config file, every other command reads its section
    if command != init.name:
        ctx.default_map = {command: load_defaults([command])}


for command in COMMANDS:
    cli.add_command(command)


if __name__ == "__main__":
    cli()
