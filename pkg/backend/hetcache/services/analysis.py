"""
Analysis Service

Memory sweeps comparing the achievable load with the converse bound, the
fixed-split gap argument, and the exhaustive worst-case demand search.
"""
import logging
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from hetcache.core.config import settings
from hetcache.core.exceptions import OutputError
from hetcache.schemas.analysis import SWEEP_COLUMNS, Sandwich, SweepRow, WorstCaseResult
from hetcache.schemas.system import SystemConfig
from hetcache.services import combinatorics as comb
from hetcache.services.converse import theorem1_bound
from hetcache.services.scheme2 import (
    achievable_bound,
    deliver,
    load_formula_exact,
    place,
    split_params,
    worst_alpha,
)
from hetcache.services.system_model import (
    DemandClass,
    alpha_profile,
    enumerate_demands,
    require_valid,
)


logger = logging.getLogger(__name__)


def default_memory_grid(cfg: SystemConfig, points: Optional[int] = None) -> List[float]:
    """
    Uniform grid on ``[0, N_c + N_u]`` plus every cache size at which an
    integer pair ``(t_c, t_u)`` fills the cache exactly.
    """
    points = settings.SWEEP_POINTS if points is None else points
    uniform = np.linspace(0.0, cfg.Nc + cfg.Nu, points)
    breakpoints = [
        (t_c * cfg.Nc + t_u * cfg.G * cfg.Nu) / cfg.K
        for t_c in range(cfg.K + 1)
        for t_u in range(cfg.users_per_group + 1)
    ]
    merged = np.unique(np.round(np.concatenate([uniform, breakpoints]), 12))
    return [float(m) for m in merged]


def _gap(achievable: float, converse: float) -> float:
    if converse > 0:
        return achievable / converse
    if achievable <= settings.ABSOLUTE_TOLERANCE:
        return 1.0
    return float("inf")


def gap_sweep(cfg: SystemConfig, M_grid: Iterable[float]) -> List[SweepRow]:
    """
    Achievable and converse loads along a grid of cache sizes.

    Raises:
        ConfigurationError: a grid point lies outside ``[0, N_c + N_u]``
    """
    rows: List[SweepRow] = []
    for M in M_grid:
        point = require_valid(cfg.with_memory(M))
        ach = achievable_bound(point)
        conv = theorem1_bound(point)
        row = SweepRow(
            M=point.M,
            beta_ach=ach.beta,
            achievable=ach.value,
            beta_conv=conv.beta,
            converse=conv.value,
            gap=_gap(ach.value, conv.value),
        )
        if row.gap > 2 + settings.ABSOLUTE_TOLERANCE or row.achievable < row.converse - settings.ABSOLUTE_TOLERANCE:
            logger.warning(f"Sandwich violated at M={row.M}: {row.model_dump()}")
        rows.append(row)
    logger.info(f"Swept {len(rows)} cache sizes for K={cfg.K}, G={cfg.G}")
    return rows


def sandwich(cfg: SystemConfig, M: float) -> Sandwich:
    """
    Loads at the converse-optimal split ``beta_star``.

    ``lower`` is the converse value, ``upper = f_c(t_c) + f_u(t_u) = 2 lower``
    and the worst symmetric delivery load sits between them.
    """
    point = require_valid(cfg.with_memory(M))
    conv = theorem1_bound(point)
    params = split_params(point, conv.beta)
    upper = float(comb.f_common(params.t_c, point.K) + comb.f_unique(params.t_u, point.K, point.G))
    alpha_star, achievable = worst_alpha(point, conv.beta)
    return Sandwich(
        beta_star=conv.beta, lower=conv.value, achievable=achievable, upper=upper, alpha_star=alpha_star
    )


def fixed_beta_gap(cfg: SystemConfig, M: float) -> float:
    """Worst symmetric load at the converse-optimal split over the converse value."""
    bounds = sandwich(cfg, M)
    return _gap(bounds.achievable, bounds.lower)


def _class_alphas(cfg: SystemConfig, demand_class: DemandClass) -> Sequence[int]:
    if demand_class == DemandClass.COMMON_ONLY:
        return [0]
    if demand_class == DemandClass.UNIQUE_ONLY:
        return [cfg.users_per_group]
    return range(cfg.users_per_group + 1)


def worst_case_bruteforce(
    cfg: SystemConfig,
    beta: float,
    demand_class: DemandClass = DemandClass.ALL,
) -> WorstCaseResult:
    """
    Simulate delivery for every demand of a class and return the heaviest.

    Ties go to the first demand in enumeration order. A maximiser with an
    asymmetric alpha profile that beats every symmetric demand is logged.

    Raises:
        EnumerationCapExceeded: the demand class is too large to enumerate
    """
    require_valid(cfg)
    demand_class = DemandClass(demand_class)
    params = split_params(cfg, beta)
    placement = place(cfg, beta)
    demands = enumerate_demands(cfg, demand_class)

    worst, worst_load = demands[0], None
    for d in demands:
        load = deliver(placement, d, params).total_load
        if worst_load is None or load > worst_load:
            worst, worst_load = d, load

    symmetric_max = max(load_formula_exact(cfg, beta, a) for a in _class_alphas(cfg, demand_class))
    result = WorstCaseResult(
        demand=worst,
        load=worst_load,
        alpha_profile=alpha_profile(worst, cfg),
        symmetric_max=symmetric_max,
        demands_checked=len(demands),
    )
    if result.asymmetric_excess:
        logger.warning(
            f"Asymmetric demand {result.alpha_profile} needs load {result.load}, "
            f"above the symmetric maximum {result.symmetric_max}"
        )
    return result


def sweep_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=list(SWEEP_COLUMNS))


def write_sweep_csv(rows: Sequence[SweepRow], target: Union[str, Path, IO[str]]) -> None:
    """
    Write sweep rows as CSV with a fixed column order.

    Raises:
        OutputError: the target cannot be written
    """
    frame = sweep_frame(rows)
    try:
        frame.to_csv(
            target,
            index=False,
            float_format=f"%.{settings.SIGNIFICANT_DIGITS}g",
            lineterminator="\n",
        )
    except OSError as exc:
        raise OutputError(f"cannot write sweep CSV: {exc}", target=str(target)) from exc
