"""
hetcache - Verification Subcommand

Runs the placement, decodability and genie suites and prints the JSON report.
"""
import argparse
from typing import TextIO

from hetcache.api.deps import get_beta, get_scenario, get_seeds
from hetcache.api.output import dumps, emit, write_text
from hetcache.core.exceptions import VerificationFailure
from hetcache.services.verification import run_verification


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "verify", parents=parents, help="Run the decodability and genie-counting suites"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    scenario = get_scenario(args)
    report = run_verification(scenario.system, get_beta(args, scenario), get_seeds(scenario))
    text = dumps(report.to_dict())
    emit(text, stdout)
    if args.out:
        write_text(args.out, text + "\n")

    failure = report.first_failure
    if failure is not None:
        raise VerificationFailure(f"{failure.name}: {failure.detail}", suite=failure.name)
    return 0
