"""
System Model Service

Configuration validation, demand-vector enumeration over the classes
D (all), D_c (common only) and D_u (unique only), per-group alpha profiles,
and the shared checker for uncoded placements.
"""
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from hetcache.core.config import settings
from hetcache.core.exceptions import ConfigurationError, DomainError, EnumerationCapExceeded
from hetcache.schemas.system import (
    Demand,
    FileId,
    FileKind,
    PlacementSpec,
    SystemConfig,
    ValidationReport,
    subfile_label,
)


logger = logging.getLogger(__name__)


class DemandClass(str, Enum):
    ALL = "all"
    COMMON_ONLY = "common_only"
    UNIQUE_ONLY = "unique_only"


def validate_config(cfg: SystemConfig) -> ValidationReport:
    """Check the SystemConfig invariants and list every violation."""
    violations: List[str] = []
    divisible = cfg.K % cfg.G == 0
    if not divisible:
        violations.append("G must divide K")
    if cfg.Nc < cfg.K:
        violations.append("N_c ≥ K violated")
    if cfg.Nu * cfg.G < cfg.K:
        violations.append("N_u ≥ K/G violated")
    if not 0 <= cfg.M <= cfg.Nc + cfg.Nu:
        violations.append("M must lie in [0, N_c + N_u]")
    return ValidationReport(valid=not violations, violations=violations)


def require_valid(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` or raise ``ConfigurationError`` with the validation report."""
    report = validate_config(cfg)
    if not report.valid:
        raise ConfigurationError(
            f"invalid system configuration: {'; '.join(report.violations)}",
            violations=report.violations,
        )
    return cfg


def library_files(cfg: SystemConfig) -> List[FileId]:
    """All N files, common first, then unique files group by group."""
    files = [FileId.common(n) for n in range(1, cfg.Nc + 1)]
    for g in range(1, cfg.G + 1):
        files.extend(FileId.unique(n, g) for n in range(1, cfg.Nu + 1))
    return files


#-----------------------------------------------
# DEMAND ENUMERATION
#-----------------------------------------------

def demand_class_size(cfg: SystemConfig, demand_class: DemandClass = DemandClass.ALL) -> int:
    """Exact cardinality of D, D_c or D_u."""
    demand_class = DemandClass(demand_class)
    per_group = cfg.users_per_group
    if demand_class == DemandClass.COMMON_ONLY:
        return math.perm(cfg.Nc, cfg.K)
    if demand_class == DemandClass.UNIQUE_ONLY:
        return math.perm(cfg.Nu, per_group) ** cfg.G

    # Per group: choose which a users ask for unique files and give them distinct files.
    group_poly = [math.comb(per_group, a) * math.perm(cfg.Nu, a) for a in range(per_group + 1)]
    total_poly = [1]
    for _ in range(cfg.G):
        merged = [0] * (len(total_poly) + per_group)
        for i, x in enumerate(total_poly):
            for j, y in enumerate(group_poly):
                merged[i + j] += x * y
        total_poly = merged
    return sum(count * math.perm(cfg.Nc, cfg.K - s) for s, count in enumerate(total_poly))


def _options(cfg: SystemConfig, k: int, demand_class: DemandClass) -> List[FileId]:
    options: List[FileId] = []
    if demand_class != DemandClass.UNIQUE_ONLY:
        options.extend(FileId.common(n) for n in range(1, cfg.Nc + 1))
    if demand_class != DemandClass.COMMON_ONLY:
        g = cfg.group_of(k)
        options.extend(FileId.unique(n, g) for n in range(1, cfg.Nu + 1))
    return options


def iter_demands(
    cfg: SystemConfig, demand_class: DemandClass = DemandClass.ALL
) -> Iterator[Demand]:
    """
    Generate a demand class in lexicographic order of (kind, index) per user.

    No cap is applied; see :func:`enumerate_demands`.
    """
    demand_class = DemandClass(demand_class)
    options = [_options(cfg, k, demand_class) for k in cfg.users]
    chosen: List[FileId] = []
    used = set()

    def backtrack(position: int) -> Iterator[Demand]:
        if position == cfg.K:
            yield Demand(requests=tuple(chosen))
            return
        for file_id in options[position]:
            if file_id in used:
                continue
            used.add(file_id)
            chosen.append(file_id)
            yield from backtrack(position + 1)
            chosen.pop()
            used.discard(file_id)

    yield from backtrack(0)


def enumerate_demands(
    cfg: SystemConfig,
    demand_class: DemandClass = DemandClass.ALL,
    cap: Optional[int] = None,
) -> List[Demand]:
    """
    Materialise D, D_c or D_u.

    Raises:
        EnumerationCapExceeded: the class is larger than ``cap``
            (``settings.ENUMERATION_CAP`` by default)
    """
    require_valid(cfg)
    demand_class = DemandClass(demand_class)
    cap = settings.ENUMERATION_CAP if cap is None else cap
    size = demand_class_size(cfg, demand_class)
    if size > cap:
        raise EnumerationCapExceeded(
            f"{demand_class.value} has {size} demands, above the cap of {cap}",
            cardinality=size,
            cap=cap,
        )
    logger.debug(f"Enumerating {size} demands of class {demand_class.value}")
    return list(iter_demands(cfg, demand_class))


def demand_order_pairs(cfg: SystemConfig, demand_class: DemandClass = DemandClass.ALL) -> int:
    """Number of (demand, user order) pairs in a class: ``|class| * K!``."""
    return demand_class_size(cfg, demand_class) * math.factorial(cfg.K)


def require_pair_cap(
    cfg: SystemConfig,
    demand_class: DemandClass = DemandClass.ALL,
    cap: Optional[int] = None,
) -> int:
    """
    Guard for brute force over every (demand, user order) pair of a class.

    Returns:
        The pair count

    Raises:
        EnumerationCapExceeded: the pair count is larger than ``cap``
            (``settings.ENUMERATION_CAP`` by default)
    """
    require_valid(cfg)
    demand_class = DemandClass(demand_class)
    cap = settings.ENUMERATION_CAP if cap is None else cap
    pairs = demand_order_pairs(cfg, demand_class)
    if pairs > cap:
        raise EnumerationCapExceeded(
            f"{demand_class.value} has {pairs} (demand, user order) pairs, above the cap of {cap}",
            cardinality=pairs,
            cap=cap,
        )
    return pairs


def validate_demand(d: Demand, cfg: SystemConfig) -> Demand:
    """Raise ``DomainError`` unless ``d`` is a member of D for ``cfg``."""
    if len(d.requests) != cfg.K:
        raise DomainError(f"demand has {len(d.requests)} entries, expected {cfg.K}")
    for k, file_id in enumerate(d.requests, start=1):
        if file_id.kind == FileKind.COMMON:
            if file_id.index > cfg.Nc:
                raise DomainError(f"user {k} requests common file {file_id.index} > N_c")
        else:
            if file_id.index > cfg.Nu:
                raise DomainError(f"user {k} requests unique file {file_id.index} > N_u")
            if file_id.group != cfg.group_of(k):
                raise DomainError(f"user {k} requests a unique file of group {file_id.group}")
    return d


def alpha_profile(d: Demand, cfg: SystemConfig) -> Tuple[int, ...]:
    """Number of unique-file requests per group."""
    counts = [0] * cfg.G
    for k in d.unique_requesters:
        counts[cfg.group_of(k) - 1] += 1
    return tuple(counts)


#-----------------------------------------------
# PLACEMENT CHECKS
#-----------------------------------------------

def check_placement(placement: PlacementSpec, cfg: Optional[SystemConfig] = None) -> ValidationReport:
    """
    Shared checker for uncoded placements.

    Verifies that every library file is partitioned (subfile sizes sum to 1),
    that no user stores more than M files, and that payload lengths match the
    subfile sizes when bits are attached.
    """
    cfg = cfg or placement.config
    violations: List[str] = []
    full_mask = (1 << cfg.K) - 1

    for key in placement.sizes:
        if key[1] & ~full_mask:
            violations.append(f"subfile {subfile_label(key)} is indexed by users outside [K]")

    for file_id in library_files(cfg):
        total = sum((size for _, size in placement.subfiles(file_id)), Fraction(0))
        if total != 1:
            violations.append(f"partition violated for {file_id.label}: subfile sizes sum to {total}")

    for k in cfg.users:
        used = placement.user_memory(k)
        if float(used) > cfg.M + settings.ABSOLUTE_TOLERANCE:
            violations.append(f"memory violated for user {k}: stores {used} > M = {cfg.M}")

    if placement.payloads is not None:
        for key, size in placement.sizes.items():
            bits = placement.payloads.get(key)
            expected = size * cfg.B
            if bits is None or expected.denominator != 1 or len(bits) != expected:
                violations.append(f"payload length mismatch for {subfile_label(key)}")

    return ValidationReport(valid=not violations, violations=violations)

