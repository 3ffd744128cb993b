"""
Split Placement and Delivery Service

The achievable side of the analysis. Each cache is split in two: a fraction
beta of the memory holds common files placed over all K users, the rest holds
the group's unique files placed over the K/G users of that group. Both parts
use the combinatorial placement in which a file is cut into one subfile per
t-subset of users. Delivery sends one XOR per (t+1)-subset that contains an
interested user.

Simulation (placement with bits, delivery, decoding) needs integer ``t_c`` and
``t_u``; the load formula and the achievable bound accept any feasible beta.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from hetcache.core.config import settings
from hetcache.core.exceptions import DecodeError, DomainError, PlacementMismatchError
from hetcache.schemas.bounds import AchievableBound
from hetcache.schemas.scheme import Message, SplitParams, Transmission, UserCache
from hetcache.schemas.system import (
    Demand,
    FileId,
    FileKind,
    PlacementSpec,
    SubfileKey,
    SystemConfig,
    subfile_label,
)
from hetcache.services import combinatorics as comb
from hetcache.services.optimizer import grid_golden_minimize
from hetcache.services.system_model import library_files, require_valid, validate_demand


logger = logging.getLogger(__name__)


#-----------------------------------------------
# MEMORY SPLIT
#-----------------------------------------------

def feasible_beta_interval(cfg: SystemConfig) -> Tuple[float, float]:
    """
    Values of beta for which both cache parts fit their libraries.

    ``beta M <= N_c`` and ``(1 - beta) M <= N_u``; the interval collapses to
    ``(0, 0)`` at ``M = 0``.
    """
    if cfg.M <= 0:
        return 0.0, 0.0
    lo = max(0.0, 1.0 - cfg.Nu / cfg.M)
    hi = min(1.0, cfg.Nc / cfg.M)
    return min(lo, hi), hi


def _snap(t, upper):
    t = np.clip(t, 0.0, upper)
    nearest = np.round(t)
    window = settings.RELATIVE_TOLERANCE * np.maximum(1.0, nearest)
    return np.where(np.abs(t - nearest) <= window, nearest, t)


def split_arrays(cfg: SystemConfig, beta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """``(t_c, t_u)`` for an array of beta values, clamped and snapped to integers."""
    per_group = cfg.users_per_group
    t_c = _snap(cfg.K * beta * cfg.M / cfg.Nc, cfg.K)
    t_u = _snap(cfg.K * (1.0 - beta) * cfg.M / (cfg.G * cfg.Nu), per_group)
    return t_c, t_u


def split_params(cfg: SystemConfig, beta: float) -> SplitParams:
    """
    Placement parameters for a memory split.

    Raises:
        DomainError: beta lies outside the feasible interval
    """
    require_valid(cfg)
    lo, hi = feasible_beta_interval(cfg)
    tol = settings.ABSOLUTE_TOLERANCE
    in_range = 0.0 <= beta <= 1.0 if cfg.M <= 0 else lo - tol <= beta <= hi + tol
    if not in_range:
        raise DomainError(
            f"beta={beta} outside the feasible interval [{lo}, {hi}]", beta=beta, M=cfg.M
        )
    beta = min(max(float(beta), 0.0), 1.0)
    t_c, t_u = split_arrays(cfg, np.array([beta]))
    return SplitParams(beta=beta, t_c=float(t_c[0]), t_u=float(t_u[0]))


def integer_splits(cfg: SystemConfig) -> List[SplitParams]:
    """Feasible splits with integer ``t_c`` and ``t_u``, by increasing beta."""
    require_valid(cfg)
    if cfg.M <= 0:
        return [split_params(cfg, 0.0)]
    lo, hi = feasible_beta_interval(cfg)
    tol = settings.ABSOLUTE_TOLERANCE
    splits = []
    for t_c in range(cfg.K + 1):
        beta = t_c * cfg.Nc / (cfg.K * cfg.M)
        if not lo - tol <= beta <= hi + tol:
            continue
        params = split_params(cfg, beta)
        if params.is_integral:
            splits.append(params)
    return splits


def nearest_integer_split(cfg: SystemConfig, beta: float) -> SplitParams:
    """
    The integer split closest to ``beta``; ties go to the smaller beta.

    Raises:
        DomainError: no split of this cache size has integer t_c and t_u
    """
    splits = integer_splits(cfg)
    if not splits:
        raise DomainError(f"no memory split at M={cfg.M} gives integer t_c and t_u", M=cfg.M)
    return min(splits, key=lambda p: (abs(p.beta - beta), p.beta))


#-----------------------------------------------
# PLACEMENT
#-----------------------------------------------

def generate_library(cfg: SystemConfig, seed: Optional[int] = None) -> Dict[FileId, np.ndarray]:
    """Pseudo-random file contents: ``B`` bits (``uint8`` 0/1) per library file."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    return {f: rng.integers(0, 2, size=cfg.B, dtype=np.uint8) for f in library_files(cfg)}


def _split_file(
    file_id: FileId,
    masks: List[int],
    bits: Optional[np.ndarray],
    sizes: Dict[SubfileKey, Fraction],
    payloads: Optional[Dict[SubfileKey, np.ndarray]],
) -> None:
    size = Fraction(1, len(masks))
    # chunks follow ascending mask order, the order PlacementSpec.subfiles reports
    chunks = np.split(bits, len(masks)) if bits is not None else [None] * len(masks)
    for mask, chunk in zip(sorted(masks), chunks):
        sizes[(file_id, mask)] = size
        if payloads is not None:
            payloads[(file_id, mask)] = chunk


def place(
    cfg: SystemConfig,
    beta: float,
    library: Optional[Dict[FileId, np.ndarray]] = None,
) -> PlacementSpec:
    """
    Split placement for an integer ``(t_c, t_u)``.

    Common files are cut into ``C(K, t_c)`` equal subfiles, one per
    ``t_c``-subset of all users. Unique files of group ``g`` are cut into
    ``C(K/G, t_u)`` subfiles, one per ``t_u``-subset of the group. With a
    ``library`` the subfile bits are attached, which requires ``B`` to be
    divisible by both subpacketisations.
    """
    params = split_params(cfg, beta)
    t_c, t_u = params.integral()
    everyone = cfg.users
    common_masks = list(comb.subsets_of_size(everyone, t_c))
    group_masks = {
        g: list(comb.subsets_of_size(cfg.group_users(g), t_u)) for g in range(1, cfg.G + 1)
    }

    if library is not None:
        for count in (len(common_masks), len(group_masks[1])):
            if cfg.B % count:
                raise DomainError(
                    f"B={cfg.B} bits cannot be cut into {count} equal subfiles", B=cfg.B
                )

    sizes: Dict[SubfileKey, Fraction] = {}
    payloads = {} if library is not None else None
    for file_id in library_files(cfg):
        masks = common_masks if file_id.kind == FileKind.COMMON else group_masks[file_id.group]
        bits = library[file_id] if library is not None else None
        _split_file(file_id, masks, bits, sizes, payloads)

    logger.debug(
        f"Placed {len(sizes)} subfiles: beta={params.beta}, t_c={t_c}, t_u={t_u}"
    )
    return PlacementSpec(config=cfg, sizes=sizes, payloads=payloads)


#-----------------------------------------------
# DELIVERY
#-----------------------------------------------

def _xor(chunks: Sequence[np.ndarray]) -> np.ndarray:
    length = max(len(c) for c in chunks)
    out = np.zeros(length, dtype=np.uint8)
    for chunk in chunks:
        out[: len(chunk)] ^= chunk
    return out


def _message(
    placement: PlacementSpec,
    d: Demand,
    subset: int,
    requesters: List[int],
    phase: FileKind,
    group: Optional[int] = None,
) -> Message:
    constituents: List[Tuple[int, SubfileKey]] = []
    for k in requesters:
        key = (d.file_of(k), subset & ~comb.user_bit(k))
        if key not in placement.sizes:
            raise PlacementMismatchError(
                f"placement holds no subfile {subfile_label(key)} for user {k}",
                user=k, subfile=subfile_label(key),
            )
        constituents.append((k, key))

    size = max(placement.sizes[key] for _, key in constituents)
    payload = None
    if placement.payloads is not None:
        payload = _xor([placement.payloads[key] for _, key in constituents])
    return Message(
        phase=phase, group=group, subset=subset, size=size,
        constituents=constituents, payload=payload,
    )


def deliver(placement: PlacementSpec, d: Demand, params: SplitParams) -> Transmission:
    """
    Multicast messages serving demand ``d``.

    Common phase: one XOR per ``(t_c + 1)``-subset of all users containing at
    least one common requester. Unique phase: per group, one XOR per
    ``(t_u + 1)``-subset of the group containing at least one unique
    requester. Subsets made only of users with nothing to receive are skipped.

    Raises:
        PlacementMismatchError: the placement lacks a subfile the scheme needs
    """
    cfg = placement.config
    validate_demand(d, cfg)
    t_c, t_u = params.integral()

    messages: List[Message] = []
    common_requesters = {k for k in cfg.users if d.file_of(k).kind == FileKind.COMMON}
    if t_c < cfg.K:
        for subset in comb.subsets_of_size(cfg.users, t_c + 1):
            requesters = [k for k in comb.members(subset) if k in common_requesters]
            if requesters:
                messages.append(_message(placement, d, subset, requesters, FileKind.COMMON))

    if t_u < cfg.users_per_group:
        for g in range(1, cfg.G + 1):
            for subset in comb.subsets_of_size(cfg.group_users(g), t_u + 1):
                requesters = [k for k in comb.members(subset) if k not in common_requesters]
                if requesters:
                    messages.append(_message(placement, d, subset, requesters, FileKind.UNIQUE, g))

    transmission = Transmission(messages=messages)
    logger.debug(f"Delivered {len(messages)} messages, load {transmission.total_load}")
    return transmission


#-----------------------------------------------
# DECODING
#-----------------------------------------------

def user_cache(placement: PlacementSpec, k: int) -> UserCache:
    """Bits stored by user ``k`` together with the public subfile layout."""
    if placement.payloads is None:
        raise DomainError("placement carries no payloads", user=k)
    contents = {key: placement.payloads[key] for key in placement.cache_of(k)}
    layout = {f: placement.subfiles(f) for f in placement.files()}
    return UserCache(
        user=k, file_size_bits=placement.config.B, contents=contents, layout=layout
    )


def decode(k: int, cache: UserCache, transmission: Transmission, d: Demand) -> np.ndarray:
    """
    Reconstruct the file requested by user ``k``.

    Every message addressed to ``k`` is stripped of the other users'
    subfiles, all of which ``k`` caches, leaving ``k``'s missing subfile.

    Raises:
        DecodeError: a side-information subfile or a piece of the file is missing
    """
    wanted = d.file_of(k)
    layout = cache.layout.get(wanted, [])
    sizes = dict(layout)
    pieces: Dict[int, np.ndarray] = {
        key[1]: bits for key, bits in cache.contents.items() if key[0] == wanted
    }

    for message in transmission.messages:
        mine = [key for user, key in message.constituents if user == k]
        if not mine:
            continue
        own_key = mine[0]
        if message.payload is None:
            raise DecodeError("message carries no payload", user=k, subfile=subfile_label(own_key))
        bits = message.payload.copy()
        for user, key in message.constituents:
            if user == k:
                continue
            side = cache.contents.get(key)
            if side is None:
                raise DecodeError(
                    f"user {k} lacks side information {subfile_label(key)}",
                    user=k, subfile=subfile_label(key),
                )
            bits[: len(side)] ^= side
        pieces[own_key[1]] = bits[: cache.bit_length(sizes[own_key[1]])]

    parts = []
    for mask, _ in layout:
        piece = pieces.get(mask)
        if piece is None:
            raise DecodeError(
                f"user {k} cannot recover {subfile_label((wanted, mask))}",
                user=k, subfile=subfile_label((wanted, mask)),
            )
        parts.append(piece)
    if not parts:
        raise DecodeError(f"no layout for {wanted.label}", user=k, subfile=wanted.label)
    return np.concatenate(parts)


#-----------------------------------------------
# LOAD FORMULA
#-----------------------------------------------

def _check_alpha(cfg: SystemConfig, alpha: float) -> None:
    if not 0 <= alpha <= cfg.users_per_group:
        raise DomainError(
            f"alpha must lie in [0, {cfg.users_per_group}]", alpha=alpha
        )


def load_formula(cfg: SystemConfig, beta: float, alpha: float) -> float:
    """
    Delivery load with ``alpha`` unique requesters in every group::

        [C(K, t_c+1) - C(G alpha, t_c+1)] / C(K, t_c)
          + G [C(K/G, t_u+1) - C(K/G - alpha, t_u+1)] / C(K/G, t_u)

    Binomials with real arguments use the Gamma function.
    """
    _check_alpha(cfg, alpha)
    params = split_params(cfg, beta)
    per_group = cfg.users_per_group
    common = comb.f_common(params.t_c, cfg.K) - comb.binom_ratio(
        cfg.G * alpha, params.t_c + 1, cfg.K, params.t_c
    )
    unique = comb.f_unique(params.t_u, cfg.K, cfg.G) - cfg.G * comb.binom_ratio(
        per_group - alpha, params.t_u + 1, per_group, params.t_u
    )
    return float(common + unique)


def load_formula_exact(cfg: SystemConfig, beta: float, alpha: int) -> Fraction:
    """Rational :func:`load_formula` for integer ``t_c``, ``t_u`` and ``alpha``."""
    _check_alpha(cfg, alpha)
    if int(alpha) != alpha:
        raise DomainError("exact load needs an integer alpha", alpha=alpha)
    t_c, t_u = split_params(cfg, beta).integral()
    return delivery_load(cfg, t_c, t_u, [int(alpha)] * cfg.G)


def load_formula_grid(cfg: SystemConfig, betas: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorised :func:`load_formula` over feasible beta values."""
    _check_alpha(cfg, alpha)
    per_group = cfg.users_per_group
    t_c, t_u = split_arrays(cfg, np.asarray(betas, dtype=float))
    common = comb.f_common(t_c, cfg.K) - comb.binom_ratio_array(cfg.G * alpha, t_c + 1, cfg.K, t_c)
    unique = comb.f_unique(t_u, cfg.K, cfg.G) - cfg.G * comb.binom_ratio_array(
        per_group - alpha, t_u + 1, per_group, t_u
    )
    return common + unique


def delivery_load(cfg: SystemConfig, t_c: int, t_u: int, alpha: Sequence[int]) -> Fraction:
    """
    Exact load of the delivery rule for any per-group profile ``alpha``.

    Common subsets lying wholly inside the set of unique requesters are
    skipped, as are unique subsets of a group with no unique requester.
    """
    if len(alpha) != cfg.G:
        raise DomainError(f"alpha profile needs {cfg.G} entries", alpha=list(alpha))
    per_group = cfg.users_per_group
    unique_total = sum(alpha)
    load = Fraction(
        math.comb(cfg.K, t_c + 1) - math.comb(unique_total, t_c + 1), math.comb(cfg.K, t_c)
    )
    for a in alpha:
        load += Fraction(
            math.comb(per_group, t_u + 1) - math.comb(per_group - a, t_u + 1),
            math.comb(per_group, t_u),
        )
    return load


#-----------------------------------------------
# ACHIEVABLE BOUND
#-----------------------------------------------

def worst_alpha_grid(cfg: SystemConfig, betas: np.ndarray) -> np.ndarray:
    """``max`` over ``alpha = 0..K/G`` of the load, for every beta."""
    loads = np.stack(
        [load_formula_grid(cfg, betas, a) for a in range(cfg.users_per_group + 1)]
    )
    return loads.max(axis=0)


def worst_alpha(cfg: SystemConfig, beta: float) -> Tuple[int, float]:
    """Smallest maximising ``alpha`` and its load."""
    loads = [load_formula(cfg, beta, a) for a in range(cfg.users_per_group + 1)]
    alpha_star = int(np.argmax(loads))
    return alpha_star, loads[alpha_star]


def achievable_bound(cfg: SystemConfig) -> AchievableBound:
    """Minimise over feasible beta the worst symmetric-demand load."""
    require_valid(cfg)
    lo, hi = feasible_beta_interval(cfg)
    result = grid_golden_minimize(lambda b: worst_alpha_grid(cfg, b), lo, hi)
    alpha_star, value = worst_alpha(cfg, result.beta)
    logger.debug(f"Achievable bound at M={cfg.M}: beta={result.beta}, value={value}")
    return AchievableBound(beta=result.beta, value=value, alpha_star=alpha_star)
