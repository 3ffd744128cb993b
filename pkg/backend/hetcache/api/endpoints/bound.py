"""
hetcache - Converse Bound Subcommand

Prints the optimised converse value under uncoded placement, the split that
attains it, and the outcome of the convexity scan.
"""
import argparse
from typing import TextIO

from hetcache.api.deps import get_scenario
from hetcache.api.output import emit_lines
from hetcache.services.converse import theorem1_bound


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "bound", parents=parents, help="Converse lower bound and its optimal memory split"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    scenario = get_scenario(args)
    result = theorem1_bound(scenario.system)
    emit_lines(
        stdout,
        value=result.value,
        beta_star=result.beta,
        convex="true" if result.convex else "false",
    )
    return 0
