"""
Verification Service

Simulation and counting suites run by the ``verify`` command:
- placement: the uncoded-placement checker (partition and memory)
- decodability: every user decodes its file bit-exactly for every demand
- genie_counting: brute-force genie averages against the counted bounds
- genie_validity: the genie bound never exceeds the delivered load
"""
import itertools
import logging
from typing import List, Optional, Sequence

import numpy as np

from hetcache.core.config import settings
from hetcache.core.exceptions import DecodeError
from hetcache.schemas.system import PlacementSpec, SystemConfig
from hetcache.schemas.verification import SuiteResult, VerificationReport
from hetcache.services.converse import r_lb, verify_genie_counting
from hetcache.services.scheme2 import decode, deliver, generate_library, place, split_params, user_cache
from hetcache.services.system_model import (
    DemandClass,
    check_placement,
    enumerate_demands,
    require_pair_cap,
    require_valid,
)


logger = logging.getLogger(__name__)


def default_seeds() -> List[int]:
    return list(range(settings.DEFAULT_SEED, settings.DEFAULT_SEED + settings.VERIFY_SEED_COUNT))


def placement_suite(placement: PlacementSpec, cfg: SystemConfig) -> SuiteResult:
    report = check_placement(placement, cfg)
    return SuiteResult(
        name="placement",
        passed=report.valid,
        checks=len(placement.sizes),
        detail=report.violations[0] if report.violations else None,
        data={"violations": report.violations},
    )


def decodability_suite(cfg: SystemConfig, beta: float, seeds: Sequence[int]) -> SuiteResult:
    params = split_params(cfg, beta)
    demands = enumerate_demands(cfg, DemandClass.ALL)
    checks = 0
    for seed in seeds:
        library = generate_library(cfg, seed)
        placement = place(cfg, beta, library)
        caches = {k: user_cache(placement, k) for k in cfg.users}
        for d in demands:
            transmission = deliver(placement, d, params)
            for k in cfg.users:
                checks += 1
                try:
                    decoded = decode(k, caches[k], transmission, d)
                except DecodeError as exc:
                    return SuiteResult(
                        name="decodability", passed=False, checks=checks,
                        detail=f"seed {seed}: {exc.detail}",
                    )
                if not np.array_equal(decoded, library[d.file_of(k)]):
                    return SuiteResult(
                        name="decodability", passed=False, checks=checks,
                        detail=f"seed {seed}: user {k} decoded a wrong {d.file_of(k).label}",
                    )
    return SuiteResult(name="decodability", passed=True, checks=checks)


def genie_counting_suite(cfg: SystemConfig, placement: PlacementSpec) -> SuiteResult:
    reports = verify_genie_counting(cfg, placement)
    failed = next((r for r in reports if not r.passed), None)
    return SuiteResult(
        name="genie_counting",
        passed=failed is None,
        checks=sum(r.pairs_checked for r in reports),
        detail=f"{failed.demand_class}: {failed.first_mismatch}" if failed else None,
        data={"reports": [r.to_dict() for r in reports]},
    )


def genie_validity_suite(cfg: SystemConfig, placement: PlacementSpec, beta: float) -> SuiteResult:
    require_pair_cap(cfg, DemandClass.ALL)
    params = split_params(cfg, beta)
    permutations = list(itertools.permutations(cfg.users))
    checks = 0
    for d in enumerate_demands(cfg, DemandClass.ALL):
        load = deliver(placement, d, params).total_load
        for u in permutations:
            checks += 1
            bound = r_lb(placement, d, u)
            if bound > load:
                return SuiteResult(
                    name="genie_validity", passed=False, checks=checks,
                    detail=f"genie bound {bound} exceeds load {load} for order {u}",
                )
    return SuiteResult(name="genie_validity", passed=True, checks=checks)


def run_verification(
    cfg: SystemConfig,
    beta: float,
    seeds: Optional[Sequence[int]] = None,
    placement: Optional[PlacementSpec] = None,
) -> VerificationReport:
    """
    Run every suite on one configuration and split.

    A given ``placement`` replaces the generated one; when it fails the
    placement checker the remaining suites are not run.

    Raises:
        EnumerationCapExceeded: D has more (demand, user order) pairs than
            ``settings.ENUMERATION_CAP``; checked before any suite runs
    """
    require_valid(cfg)
    require_pair_cap(cfg, DemandClass.ALL)
    seeds = list(default_seeds() if seeds is None else seeds)
    report = VerificationReport(config=cfg, beta=beta, seeds=seeds)

    placement = placement if placement is not None else place(cfg, beta)
    report.suites.append(placement_suite(placement, cfg))
    if report.passed:
        report.suites.append(decodability_suite(cfg, beta, seeds))
        report.suites.append(genie_counting_suite(cfg, placement))
        report.suites.append(genie_validity_suite(cfg, placement, beta))

    for suite in report.suites:
        log = logger.info if suite.passed else logger.warning
        log(f"Suite {suite.name}: {'pass' if suite.passed else 'FAIL'} ({suite.checks} checks)")
    return report
