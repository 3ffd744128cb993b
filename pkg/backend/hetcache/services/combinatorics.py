"""
Combinatorics Service

Generalised binomial coefficients, the two bound kernels used on both sides of
the analysis, permutation counting, and the bitmask helpers used to index
subfiles by the set of users caching them.

Users are numbered 1..K; a set of users is an ``int`` bitmask where user ``k``
is bit ``k - 1``.
"""
import itertools
import logging
import math
from fractions import Fraction
from numbers import Real
from typing import Iterator, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from hetcache.core.exceptions import CombinatoricsRangeError, DomainError


logger = logging.getLogger(__name__)


def _is_integral(x: Real) -> bool:
    if isinstance(x, (int, np.integer)):
        return True
    return float(x).is_integer()


def _binom_support(n: Real, k: Real) -> bool:
    # Zero outside n >= 0, k >= 0, n - k > -1; on integers the last test is n >= k.
    return n >= 0 and k >= 0 and n - k > -1


def gen_binom(n: Real, k: Real) -> Union[int, float]:
    """
    Binomial coefficient for real arguments.

    Returns ``Gamma(n+1) / (Gamma(k+1) Gamma(n-k+1))`` on its support and 0 when
    ``n < 0``, ``k < 0`` or ``n - k <= -1``. Integer arguments take the exact
    integer path and return an ``int``.

    Raises:
        CombinatoricsRangeError: the value overflows a double
    """
    if not _binom_support(n, k):
        return 0
    if _is_integral(n) and _is_integral(k):
        return math.comb(int(n), int(k))
    try:
        return math.exp(_log_binom(n, k))
    except OverflowError as exc:
        raise CombinatoricsRangeError(
            f"C({n}, {k}) exceeds double precision range", n=n, k=k
        ) from exc


def _log_binom(n: Real, k: Real) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binom_ratio(a: Real, b: Real, n: Real, k: Real) -> float:
    """
    ``C(a, b) / C(n, k)`` evaluated in log space.

    The denominator must be non-zero. All-integer arguments are divided exactly.
    """
    if not _binom_support(n, k):
        raise DomainError(f"C({n}, {k}) is zero and cannot divide", n=n, k=k)
    if not _binom_support(a, b):
        return 0.0
    if all(_is_integral(x) for x in (a, b, n, k)):
        return float(Fraction(math.comb(int(a), int(b)), math.comb(int(n), int(k))))
    return math.exp(_log_binom(a, b) - _log_binom(n, k))


def binom_ratio_array(a, b, n, k) -> np.ndarray:
    """Vectorised :func:`binom_ratio`; zero wherever the numerator vanishes."""
    arrays = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, n, k)))
    a_arr, b_arr, n_arr, k_arr = arrays
    if not np.all((n_arr >= 0) & (k_arr >= 0) & (n_arr - k_arr > -1)):
        raise DomainError("binomial ratio with a vanishing denominator")
    out = np.zeros(a_arr.shape, dtype=float)
    support = (a_arr >= 0) & (b_arr >= 0) & (a_arr - b_arr > -1)
    if np.any(support):
        av, bv, nv, kv = (x[support] for x in arrays)
        log_num = gammaln(av + 1) - gammaln(bv + 1) - gammaln(av - bv + 1)
        log_den = gammaln(nv + 1) - gammaln(kv + 1) - gammaln(nv - kv + 1)
        out[support] = np.exp(log_num - log_den)
    return out


def _check_range(t, lo: float, hi: float, what: str) -> None:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < lo) or np.any(arr > hi) or np.any(np.isnan(arr)):
        raise DomainError(f"{what} must lie in [{lo}, {hi}]", value=t)


def f_common(t, K: int):
    """
    Common-file kernel ``C(K, t+1) / C(K, t) = (K - t) / (t + 1)``.

    Accepts a scalar or an array ``t`` in ``[0, K]``.
    """
    _check_range(t, 0, K, "t")
    return (K - t) / (t + 1)


def f_unique(t, K: int, G: int):
    """
    Unique-file kernel ``G C(K/G, t+1) / C(K/G, t) = G (K/G - t) / (t + 1)``.

    Accepts a scalar or an array ``t`` in ``[0, K/G]``; ``G`` must divide ``K``.
    """
    if G <= 0 or K % G:
        raise DomainError("G must divide K", K=K, G=G)
    per_group = K // G
    _check_range(t, 0, per_group, "t")
    return G * (per_group - t) / (t + 1)


def perm_count(K: int, t: int) -> int:
    """
    Permutations of ``[K]`` in which a designated user precedes ``t`` designated others.

    Equals ``(K-1-t)! t! C(K, t+1)``, i.e. ``K! / (t + 1)``.
    """
    if not 0 <= t <= K - 1:
        raise DomainError("t must lie in [0, K-1]", K=K, t=t)
    return math.factorial(K - 1 - t) * math.factorial(t) * math.comb(K, t + 1)


#-----------------------------------------------
# USER SETS AS BITMASKS
#-----------------------------------------------

def user_bit(k: int) -> int:
    return 1 << (k - 1)


def mask_of(users: Sequence[int]) -> int:
    mask = 0
    for k in users:
        mask |= user_bit(k)
    return mask


def members(mask: int) -> Tuple[int, ...]:
    """Users in ``mask`` in increasing order."""
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets_of_size(users: Sequence[int], size: int) -> Iterator[int]:
    """Bitmasks of all ``size``-subsets of ``users`` in lexicographic order."""
    if size < 0 or size > len(users):
        return
    for combo in itertools.combinations(sorted(users), size):
        yield mask_of(combo)
