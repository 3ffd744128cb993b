"""
hetcache - Shared Subcommand Dependencies

Resolution of the inputs every subcommand needs from its parsed arguments:
the scenario, the seed and the memory split.
"""
import argparse
import logging
from typing import List

from hetcache.core.config import settings
from hetcache.core.exceptions import DomainError
from hetcache.schemas.scenario import ScenarioFile
from hetcache.services.scenario import load_scenario
from hetcache.services.scheme2 import achievable_bound, nearest_integer_split


logger = logging.getLogger(__name__)


def get_scenario(args: argparse.Namespace) -> ScenarioFile:
    """Scenario named by ``--scenario`` with ``--seed`` applied on top."""
    scenario = load_scenario(args.scenario)
    if getattr(args, "seed", None) is not None:
        scenario = scenario.model_copy(update={"seed": args.seed})
    return scenario


def get_beta(args: argparse.Namespace, scenario: ScenarioFile) -> float:
    """
    ``--beta``, else the scenario's beta, else the achievable-optimal split
    moved to the nearest split with integer ``t_c`` and ``t_u``.

    Raises:
        DomainError: no beta was given and no split of this cache size is integer
    """
    if getattr(args, "beta", None) is not None:
        return args.beta
    if scenario.beta is not None:
        return scenario.beta
    optimum = achievable_bound(scenario.system).beta
    try:
        params = nearest_integer_split(scenario.system, optimum)
    except DomainError as exc:
        raise DomainError(f"{exc.detail}; pass --beta or set beta in the scenario", **exc.context) from exc
    logger.info(
        f"No beta given; achievable-optimal split {optimum} moved to beta={params.beta} "
        f"(t_c={params.t_c:g}, t_u={params.t_u:g})"
    )
    return params.beta


def get_seeds(scenario: ScenarioFile) -> List[int]:
    """Consecutive seeds starting at the scenario seed."""
    return [(scenario.seed + i) % 2**64 for i in range(settings.VERIFY_SEED_COUNT)]
