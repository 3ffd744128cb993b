"""
hetcache - Achievable Load Subcommand
"""
import argparse
from typing import TextIO

from hetcache.api.deps import get_scenario
from hetcache.api.output import emit_lines
from hetcache.services.scheme2 import achievable_bound


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "achievable", parents=parents, help="Worst-case delivery load minimised over the memory split"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    scenario = get_scenario(args)
    result = achievable_bound(scenario.system)
    emit_lines(stdout, value=result.value, beta=result.beta, alpha_star=result.alpha_star)
    return 0
