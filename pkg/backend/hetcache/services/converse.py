"""
Converse Service

Lower-bound machinery for uncoded placements. A genie-aided virtual user is
built along a permutation of the users; the subfile bits it still misses give
a lower bound on the delivery load of any scheme using the same placement.
Averaging that bound over permutations and over the all-common and
all-unique demand classes reduces it to weighted sums over memory profiles,
which are bounded from below by Jensen's inequality and finally minimised over
the memory split.
"""
import itertools
import logging
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from hetcache.core.config import settings
from hetcache.core.exceptions import DomainError
from hetcache.schemas.bounds import ConverseBound
from hetcache.schemas.converse import (
    ChainStage,
    ConverseChain,
    CountedUniqueBound,
    GenieCache,
    GenieCountingReport,
    MemoryProfile,
)
from hetcache.schemas.scheme import SplitParams
from hetcache.schemas.system import Demand, FileKind, PlacementSpec, SubfileKey, SystemConfig, subfile_label
from hetcache.services import combinatorics as comb
from hetcache.services.optimizer import convexity_scan, grid_golden_minimize
from hetcache.services.scheme2 import deliver, feasible_beta_interval, split_arrays, split_params
from hetcache.services.system_model import DemandClass, enumerate_demands, require_pair_cap, require_valid


logger = logging.getLogger(__name__)

PROFILE_QUANTUM = 10**9


def _check_permutation(u: Sequence[int], K: int) -> None:
    if sorted(u) != list(range(1, K + 1)):
        raise DomainError(f"{tuple(u)} is not a permutation of the users", order=list(u))


#-----------------------------------------------
# GENIE-AIDED USER
#-----------------------------------------------

def genie_cache(placement: PlacementSpec, d: Demand, u: Sequence[int]) -> GenieCache:
    """
    Composite cache along the permutation ``u``.

    Position ``k`` keeps the cache of ``u_k`` minus every subfile already
    cached by ``u_1 .. u_{k-1}`` and minus the files they requested.
    """
    cfg = placement.config
    _check_permutation(u, cfg.K)
    retained: Dict[SubfileKey, Fraction] = {}
    position: Dict[SubfileKey, int] = {}
    covered = 0
    requested = set()
    for k, user in enumerate(u, start=1):
        bit = comb.user_bit(user)
        for key, size in placement.sizes.items():
            file_id, mask = key
            if mask & bit and not mask & covered and file_id not in requested:
                retained[key] = size
                position[key] = k
        covered |= bit
        requested.add(d.file_of(user))
    return GenieCache(order=tuple(u), retained=retained, position=position)


def _genie_terms(placement: PlacementSpec, d: Demand, u: Sequence[int]):
    covered = 0
    for user in u:
        covered |= comb.user_bit(user)
        file_id = d.file_of(user)
        for mask, size in placement.subfiles(file_id):
            if not mask & covered:
                yield (file_id, mask), size


def r_lb(placement: PlacementSpec, d: Demand, u: Sequence[int]) -> Fraction:
    """
    Genie-aided lower bound on the load for demand ``d`` and permutation ``u``.

    At position ``k`` the file requested by ``u_k`` contributes every subfile
    cached by none of ``u_1 .. u_k``.
    """
    _check_permutation(u, placement.config.K)
    return sum((size for _, size in _genie_terms(placement, d, u)), Fraction(0))


#-----------------------------------------------
# MEMORY PROFILES
#-----------------------------------------------

def valid_i_range(cfg: SystemConfig, t: int) -> range:
    """In-group member counts possible for a ``t``-subset of all users."""
    per_group = cfg.users_per_group
    return range(max(0, t - cfg.K + per_group), min(t, per_group) + 1)


def _beta_hat(cfg: SystemConfig, x_c: Sequence[Fraction]) -> float:
    if cfg.M <= 0:
        return 0.0
    mean = sum((t * x for t, x in enumerate(x_c)), Fraction(0))
    return float(min(max(cfg.Nc * mean / (cfg.K * Fraction(cfg.M)), 0), 1))


def _unique_marginal(cfg: SystemConfig, x_u_ti: Dict[Tuple[int, int], Fraction]) -> List[Fraction]:
    x_u = [Fraction(0)] * (cfg.K + 1)
    for (t, _), x in x_u_ti.items():
        x_u[t] += x / cfg.G
    return x_u


def memory_profiles(placement: PlacementSpec, cfg: Optional[SystemConfig] = None) -> MemoryProfile:
    """Extract ``x_c``, ``x_u_ti``, ``x_u`` and ``beta_hat`` from a placement."""
    cfg = cfg or placement.config
    x_c = [Fraction(0)] * (cfg.K + 1)
    x_u_ti = {(t, i): Fraction(0) for t in range(cfg.K + 1) for i in valid_i_range(cfg, t)}
    group_masks = {g: comb.mask_of(cfg.group_users(g)) for g in range(1, cfg.G + 1)}

    for (file_id, mask), size in placement.sizes.items():
        t = comb.popcount(mask)
        if file_id.kind == FileKind.COMMON:
            x_c[t] += size / cfg.Nc
        else:
            i = comb.popcount(mask & group_masks[file_id.group])
            x_u_ti[(t, i)] += size / cfg.Nu

    return MemoryProfile(
        x_c=x_c, x_u=_unique_marginal(cfg, x_u_ti), x_u_ti=x_u_ti, beta_hat=_beta_hat(cfg, x_c)
    )


def random_memory_profile(cfg: SystemConfig, rng: np.random.Generator) -> MemoryProfile:
    """
    Random profile satisfying the memory budget of some feasible split.

    Both profiles are drawn uniformly from the simplex, quantised to exact
    rationals, and mixed with the point mass at zero until their first
    moments fit ``K beta M / N_c`` and ``K (1 - beta) M / (G N_u)`` for a
    uniformly drawn feasible ``beta``.
    """
    require_valid(cfg)
    lo, hi = feasible_beta_interval(cfg)
    beta = float(rng.uniform(lo, hi)) if hi > lo else lo
    params = split_params(cfg, beta)

    def draw(size: int) -> List[Fraction]:
        counts = np.floor(rng.dirichlet(np.ones(size)) * PROFILE_QUANTUM).astype(np.int64)
        counts[-1] = PROFILE_QUANTUM - counts[:-1].sum()
        return [Fraction(int(c), PROFILE_QUANTUM) for c in counts]

    def fit(weights: List[Fraction], moments: List[int], budget: float) -> List[Fraction]:
        mean = sum((m * w for m, w in zip(moments, weights)), Fraction(0))
        target = Fraction(budget).limit_denominator(PROFILE_QUANTUM)
        if target > budget:
            target -= Fraction(1, PROFILE_QUANTUM)
        target = max(target, Fraction(0))
        if mean <= target:
            return weights
        scale = target / mean
        mixed = [w * scale for w in weights]
        # moments[0] is always zero
        mixed[0] += 1 - scale
        return mixed

    x_c = fit(draw(cfg.K + 1), list(range(cfg.K + 1)), params.t_c)

    pairs = [(t, i) for t in range(cfg.K + 1) for i in valid_i_range(cfg, t)]
    weights = fit(draw(len(pairs)), [t for t, _ in pairs], params.t_u)
    x_u_ti = {pair: w * cfg.G for pair, w in zip(pairs, weights)}

    return MemoryProfile(
        x_c=x_c, x_u=_unique_marginal(cfg, x_u_ti), x_u_ti=x_u_ti, beta_hat=_beta_hat(cfg, x_c)
    )


#-----------------------------------------------
# COUNTING BOUNDS
#-----------------------------------------------

def common_coefficient(t: int, K: int) -> Fraction:
    return Fraction(K - t, t + 1)


def unique_coefficient(t: int, K: int, G: int) -> Fraction:
    """Relaxed coefficient ``G (K/G - min(t, K/G)) / (t + 1)``."""
    per_group = K // G
    return Fraction(G * (per_group - min(t, per_group)), t + 1)


def counted_common_bound(profile: MemoryProfile, K: int) -> Fraction:
    """``sum_t' f_c(t') x_c[t']``."""
    return sum((common_coefficient(t, K) * x for t, x in enumerate(profile.x_c)), Fraction(0))


def counted_unique_bound(profile: MemoryProfile, K: int, G: int) -> CountedUniqueBound:
    """
    Unique-file counting bound in its exact and relaxed forms.

    The exact form weights ``x_u_ti[(t', i)]`` by ``(K/G - i) / (t' + 1)``;
    the relaxed form replaces ``i`` by its largest value ``min(t', K/G)``
    and so never exceeds the exact one.
    """
    if G <= 0 or K % G:
        raise DomainError("G must divide K", K=K, G=G)
    per_group = K // G
    exact = sum(
        (Fraction(per_group - i, t + 1) * x for (t, i), x in profile.x_u_ti.items()), Fraction(0)
    )
    relaxed = sum(
        (unique_coefficient(t, K, G) * x for t, x in enumerate(profile.x_u)), Fraction(0)
    )
    return CountedUniqueBound(exact=exact, relaxed=relaxed)


def _relaxed_unique_kernel(t: float, K: int, G: int) -> float:
    per_group = K // G
    return comb.f_unique(min(t, per_group), K, G)


def jensen_values(profile: MemoryProfile, cfg: SystemConfig) -> Tuple[float, float]:
    """Kernels at the profile means: ``(f_c(E x_c), f_u(E x_u))``."""
    return (
        float(comb.f_common(float(profile.mean_common), cfg.K)),
        float(_relaxed_unique_kernel(float(profile.mean_unique), cfg.K, cfg.G)),
    )


#-----------------------------------------------
# BRUTE-FORCE COUNTING CHECK
#-----------------------------------------------

def appearance_closed_form(
    cfg: SystemConfig, key: SubfileKey, demand_class: DemandClass, class_size: int
) -> Fraction:
    """Number of (demand, permutation) pairs in which the genie bound counts ``key``."""
    file_id, mask = key
    t = comb.popcount(mask)
    if t == cfg.K:
        return Fraction(0)
    if demand_class == DemandClass.COMMON_ONLY:
        if file_id.kind != FileKind.COMMON:
            return Fraction(0)
        return Fraction(class_size * (cfg.K - t) * comb.perm_count(cfg.K, t), cfg.Nc)
    if file_id.kind != FileKind.UNIQUE:
        return Fraction(0)
    i = comb.popcount(mask & comb.mask_of(cfg.group_users(file_id.group)))
    return Fraction(class_size * (cfg.users_per_group - i) * comb.perm_count(cfg.K, t), cfg.Nu)


def _verify_class(
    cfg: SystemConfig,
    placement: PlacementSpec,
    profile: MemoryProfile,
    demand_class: DemandClass,
) -> GenieCountingReport:
    demands = enumerate_demands(cfg, demand_class)
    permutations = list(itertools.permutations(cfg.users))
    appearances: Counter = Counter()
    total = Fraction(0)
    for d in demands:
        for u in permutations:
            for key, size in _genie_terms(placement, d, u):
                appearances[key] += 1
                total += size
    pairs = len(demands) * len(permutations)
    brute_force = total / pairs

    if demand_class == DemandClass.COMMON_ONLY:
        closed_form = counted_common_bound(profile, cfg.K)
    else:
        closed_form = counted_unique_bound(profile, cfg.K, cfg.G).exact

    first_mismatch = None
    max_error = Fraction(0)
    for key in sorted(placement.sizes, key=lambda k: (k[0].sort_key, k[1])):
        expected = appearance_closed_form(cfg, key, demand_class, len(demands))
        error = abs(appearances.get(key, 0) - expected)
        max_error = max(max_error, error)
        if error and first_mismatch is None:
            first_mismatch = (
                f"{subfile_label(key)}: counted {appearances.get(key, 0)} times, "
                f"closed form {expected}"
            )
    average_error = abs(brute_force - closed_form)
    max_error = max(max_error, average_error)
    if average_error and first_mismatch is None:
        first_mismatch = f"average: brute force {brute_force}, closed form {closed_form}"

    if first_mismatch is not None:
        logger.warning(f"Genie counting mismatch for {demand_class.value}: {first_mismatch}")
    return GenieCountingReport(
        demand_class=demand_class.value,
        pairs_checked=pairs,
        brute_force=brute_force,
        closed_form=closed_form,
        max_abs_error=float(max_error),
        first_mismatch=first_mismatch,
    )


def verify_genie_counting(cfg: SystemConfig, placement: PlacementSpec) -> List[GenieCountingReport]:
    """
    Exhaustive check of the counting arguments on one placement.

    For the all-common and the all-unique classes, averages the genie bound
    over every (demand, permutation) pair in exact arithmetic and compares
    it with the counted bound, and compares every subfile's appearance count
    with its closed form.

    Raises:
        EnumerationCapExceeded: a class has more (demand, user order) pairs
            than ``settings.ENUMERATION_CAP``
    """
    require_valid(cfg)
    for demand_class in (DemandClass.COMMON_ONLY, DemandClass.UNIQUE_ONLY):
        require_pair_cap(cfg, demand_class)
    profile = memory_profiles(placement, cfg)
    return [
        _verify_class(cfg, placement, profile, demand_class)
        for demand_class in (DemandClass.COMMON_ONLY, DemandClass.UNIQUE_ONLY)
    ]


#-----------------------------------------------
# OPTIMISED CONVERSE
#-----------------------------------------------

def converse_objective_grid(cfg: SystemConfig, betas: np.ndarray) -> np.ndarray:
    """``(f_c(t_c) + f_u(t_u)) / 2`` for every beta."""
    t_c, t_u = split_arrays(cfg, betas)
    return 0.5 * (comb.f_common(t_c, cfg.K) + comb.f_unique(t_u, cfg.K, cfg.G))


def theorem1_bound(cfg: SystemConfig) -> ConverseBound:
    """Minimise the averaged kernel bound over feasible beta and scan it for convexity."""
    require_valid(cfg)
    lo, hi = feasible_beta_interval(cfg)
    objective = lambda b: converse_objective_grid(cfg, np.asarray(b, dtype=float))  # noqa: E731
    result = grid_golden_minimize(objective, lo, hi)

    if result.grid_points > 1:
        scan = convexity_scan(objective(np.linspace(lo, hi, result.grid_points)))
    else:
        scan = convexity_scan(np.array([result.value]))
    if not scan.convex:
        logger.warning(
            f"Converse objective failed the convexity scan at M={cfg.M}: "
            f"second difference {scan.worst_second_difference}"
        )
    logger.debug(f"Converse bound at M={cfg.M}: beta={result.beta}, value={result.value}")
    return ConverseBound(
        beta=result.beta,
        value=result.value,
        convex=scan.convex,
        worst_second_difference=scan.worst_second_difference,
    )


#-----------------------------------------------
# CONVERSE CHAIN
#-----------------------------------------------

def class_average_loads(placement: PlacementSpec, params: SplitParams) -> Tuple[Fraction, Fraction]:
    """Average delivered load over the all-common and the all-unique demands."""
    cfg = placement.config
    averages = []
    for demand_class in (DemandClass.COMMON_ONLY, DemandClass.UNIQUE_ONLY):
        loads = [deliver(placement, d, params).total_load for d in enumerate_demands(cfg, demand_class)]
        averages.append(sum(loads, Fraction(0)) / len(loads))
    return averages[0], averages[1]


def _genie_average(placement: PlacementSpec, demands: List[Demand]) -> Fraction:
    permutations = list(itertools.permutations(placement.config.users))
    total = sum(
        (r_lb(placement, d, u) for d in demands for u in permutations), Fraction(0)
    )
    return total / (len(demands) * len(permutations))


def converse_chain(
    placement: PlacementSpec, cfg: SystemConfig, params: SplitParams
) -> ConverseChain:
    """
    Evaluate every step of the converse argument on one placement.

    From the worst-case delivered load down to the optimised bound, each
    stage lower-bounds the one before it.
    """
    require_valid(cfg)
    for demand_class in (DemandClass.COMMON_ONLY, DemandClass.UNIQUE_ONLY):
        require_pair_cap(cfg, demand_class)
    loads = {}
    for demand_class in (DemandClass.ALL, DemandClass.COMMON_ONLY, DemandClass.UNIQUE_ONLY):
        demands = enumerate_demands(cfg, demand_class)
        loads[demand_class] = (demands, [deliver(placement, d, params).total_load for d in demands])

    max_all = max(loads[DemandClass.ALL][1])
    max_c = max(loads[DemandClass.COMMON_ONLY][1])
    max_u = max(loads[DemandClass.UNIQUE_ONLY][1])
    avg_c, avg_u = (
        sum(loads[c][1], Fraction(0)) / len(loads[c][1])
        for c in (DemandClass.COMMON_ONLY, DemandClass.UNIQUE_ONLY)
    )
    genie_c = _genie_average(placement, loads[DemandClass.COMMON_ONLY][0])
    genie_u = _genie_average(placement, loads[DemandClass.UNIQUE_ONLY][0])

    profile = memory_profiles(placement, cfg)
    counted_c = counted_common_bound(profile, cfg.K)
    counted_u = counted_unique_bound(profile, cfg.K, cfg.G)
    jensen_c, jensen_u = jensen_values(profile, cfg)

    stages = [
        ChainStage(name="worst_case_load", value=float(max_all)),
        ChainStage(name="max_class_worst_case", value=float(max(max_c, max_u))),
        ChainStage(name="half_sum_class_worst_case", value=float((max_c + max_u) / 2)),
        ChainStage(name="half_sum_class_average", value=float((avg_c + avg_u) / 2)),
        ChainStage(name="genie_average", value=float((genie_c + genie_u) / 2)),
        ChainStage(name="counted_bound", value=float((counted_c + counted_u.exact) / 2)),
        ChainStage(name="relaxed_counted_bound", value=float((counted_c + counted_u.relaxed) / 2)),
        ChainStage(name="jensen", value=0.5 * (jensen_c + jensen_u)),
        ChainStage(name="optimised_bound", value=theorem1_bound(cfg).value),
    ]

    tol = settings.ABSOLUTE_TOLERANCE
    first_violation = None
    for previous, current in zip(stages, stages[1:]):
        if current.value > previous.value + tol:
            first_violation = f"{current.name} ({current.value}) exceeds {previous.name} ({previous.value})"
            logger.warning(f"Converse chain broken: {first_violation}")
            break
    return ConverseChain(
        stages=stages, non_increasing=first_violation is None, first_violation=first_violation
    )
