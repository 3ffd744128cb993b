"""
Optimizer Service

One-dimensional minimisation over the memory split beta. Objectives are
evaluated on a uniform grid first; every local minimum of the grid is then
refined by golden-section search on its bracketing interval.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from hetcache.core.config import settings
from hetcache.core.exceptions import DomainError
from hetcache.schemas.bounds import ConvexityReport, OptimizationResult


logger = logging.getLogger(__name__)

PHI_RATIO = 2 / (1 + math.sqrt(5))
MAX_ITERATIONS = 200

ScalarObjective = Callable[[float], float]
GridObjective = Callable[[np.ndarray], np.ndarray]


def golden_section(
    f: ScalarObjective, lo: float, hi: float, tol: Optional[float] = None
) -> Tuple[float, float]:
    """
    Golden-section search for a minimum of ``f`` on ``[lo, hi]``.

    The bracket endpoints are compared with the interior estimate, so a
    minimum sitting on the boundary is returned exactly.

    Returns:
        ``(argmin, minimum)``
    """
    if hi < lo:
        raise DomainError("empty search interval", lo=lo, hi=hi)
    tol = settings.OPTIMIZER_TOLERANCE if tol is None else tol

    x_lo, x_hi = lo, hi
    x1 = x_hi - PHI_RATIO * (x_hi - x_lo)
    x2 = x_lo + PHI_RATIO * (x_hi - x_lo)
    f1, f2 = f(x1), f(x2)
    iteration = 0
    while abs(x_hi - x_lo) > tol and iteration < MAX_ITERATIONS:
        if f2 > f1:
            x_hi, x2, f2 = x2, x1, f1
            x1 = x_hi - PHI_RATIO * (x_hi - x_lo)
            f1 = f(x1)
        else:
            x_lo, x1, f1 = x1, x2, f2
            x2 = x_lo + PHI_RATIO * (x_hi - x_lo)
            f2 = f(x2)
        iteration += 1

    x_mid = 0.5 * (x_lo + x_hi)
    best = (x_mid, f(x_mid))
    for x in (lo, hi):
        fx = f(x)
        if fx < best[1]:
            best = (x, fx)
    return best


def _local_minima(values: np.ndarray) -> np.ndarray:
    # First point of every plateau only.
    n = len(values)
    left = np.ones(n, dtype=bool)
    right = np.ones(n, dtype=bool)
    left[1:] = values[1:] < values[:-1]
    right[:-1] = values[:-1] <= values[1:]
    return np.flatnonzero(left & right)


def grid_golden_minimize(
    f: GridObjective,
    lo: float,
    hi: float,
    points: Optional[int] = None,
    tol: Optional[float] = None,
) -> OptimizationResult:
    """
    Minimise a vectorised objective on ``[lo, hi]``.

    ``f`` maps an array of beta values to an array of objective values.
    A degenerate interval is evaluated once.
    """
    points = settings.OPTIMIZER_GRID_POINTS if points is None else points
    tol = settings.OPTIMIZER_TOLERANCE if tol is None else tol

    def scalar(x: float) -> float:
        return float(f(np.array([x]))[0])

    if hi - lo <= tol:
        return OptimizationResult(beta=lo, value=scalar(lo), grid_points=1)

    grid = np.linspace(lo, hi, points)
    values = f(grid)
    best_index = int(np.argmin(values))
    best = (float(grid[best_index]), float(values[best_index]))

    minima = _local_minima(values)
    for i in minima:
        a = float(grid[max(i - 1, 0)])
        b = float(grid[min(i + 1, points - 1)])
        x, fx = golden_section(scalar, a, b, tol)
        if fx < best[1]:
            best = (x, fx)

    logger.debug(f"Refined {len(minima)} grid minima on [{lo}, {hi}]: beta={best[0]}, value={best[1]}")
    return OptimizationResult(
        beta=best[0], value=best[1], grid_points=points, refinements=len(minima)
    )


def convexity_scan(values: np.ndarray, tol: Optional[float] = None) -> ConvexityReport:
    """Check ``f(x-h) + f(x+h) >= 2 f(x)`` on a uniform grid of values."""
    tol = settings.CONVEXITY_TOLERANCE if tol is None else tol
    values = np.asarray(values, dtype=float)
    if len(values) < 3:
        return ConvexityReport(convex=True, worst_second_difference=0.0)
    second = values[:-2] + values[2:] - 2 * values[1:-1]
    worst = float(np.min(second))
    return ConvexityReport(convex=worst >= -tol, worst_second_difference=worst)
