"""
Bound Schemas

Results of the memory-split optimisation on the achievable and converse sides.
"""
from pydantic import BaseModel, Field


class ConvexityReport(BaseModel):
    """Discrete convexity scan over a uniform grid."""
    convex: bool
    worst_second_difference: float = Field(
        ..., description="Smallest f(x-h) + f(x+h) - 2 f(x) over the grid"
    )


class OptimizationResult(BaseModel):
    """Minimiser found by grid search plus golden-section refinement."""
    beta: float
    value: float
    grid_points: int = Field(..., ge=1)
    refinements: int = Field(0, ge=0, description="Local grid minima refined")


class AchievableBound(BaseModel):
    """Minimum over beta of the worst symmetric-demand delivery load."""
    beta: float
    value: float
    alpha_star: int = Field(..., ge=0, description="Unique requesters per group at the optimum")


class ConverseBound(BaseModel):
    """Minimum over beta of the averaged kernel bound, with its convexity check."""
    beta: float
    value: float
    convex: bool
    worst_second_difference: float = 0.0
