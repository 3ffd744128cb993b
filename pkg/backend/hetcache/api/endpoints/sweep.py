"""
hetcache - Memory Sweep Subcommand

Writes the achievable/converse sweep as CSV to ``--out`` or stdout.
"""
import argparse
from typing import TextIO

from hetcache.api.deps import get_scenario
from hetcache.services.analysis import gap_sweep, write_sweep_csv
from hetcache.services.scenario import memory_grid


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "sweep", parents=parents, help="Achievable and converse loads over a grid of cache sizes"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    scenario = get_scenario(args)
    rows = gap_sweep(scenario.system, memory_grid(scenario))
    write_sweep_csv(rows, args.out if args.out else stdout)
    return 0
