"""
hetcache - Simulation Subcommand

Places a seeded library with the chosen split, delivers every demand, and
reports the worst case. The worst demand is also simulated bit by bit and
its transmission can be dumped with ``--out``.
"""
import argparse
import logging
from typing import TextIO

import numpy as np

from hetcache.api.deps import get_beta, get_scenario
from hetcache.api.output import dumps, emit, write_text
from hetcache.services.analysis import worst_case_bruteforce
from hetcache.services.scheme2 import (
    decode,
    deliver,
    generate_library,
    place,
    split_params,
    user_cache,
)


logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "simulate", parents=parents, help="Simulate delivery for every demand and report the worst case"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    scenario = get_scenario(args)
    cfg = scenario.system
    beta = get_beta(args, scenario)
    params = split_params(cfg, beta)
    worst = worst_case_bruteforce(cfg, beta)

    library = generate_library(cfg, scenario.seed)
    placement = place(cfg, beta, library)
    transmission = deliver(placement, worst.demand, params)
    decoded = all(
        np.array_equal(
            decode(k, user_cache(placement, k), transmission, worst.demand),
            library[worst.demand.file_of(k)],
        )
        for k in cfg.users
    )

    summary = {
        "config": cfg.to_json_dict(),
        "seed": scenario.seed,
        "beta": beta,
        "t_c": params.t_c,
        "t_u": params.t_u,
        "demands_checked": worst.demands_checked,
        "worst_load": worst.load,
        "worst_demand": worst.demand.to_records(),
        "alpha_profile": list(worst.alpha_profile),
        "symmetric_max": worst.symmetric_max,
        "asymmetric_excess": worst.asymmetric_excess,
        "messages": len(transmission.messages),
        "decoded": decoded,
    }
    emit(dumps(summary), stdout)
    if args.out:
        write_text(args.out, dumps(transmission.to_records()) + "\n")
        logger.info(f"Transmission of the worst demand written to {args.out}")
    return 0 if decoded else 1
