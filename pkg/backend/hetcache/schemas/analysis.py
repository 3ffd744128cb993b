"""
Analysis Schemas

Rows of the memory sweep and results of the gap and worst-case searches.
"""
from fractions import Fraction
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from hetcache.schemas.system import Demand


SWEEP_COLUMNS = ("M", "beta_ach", "achievable", "beta_conv", "converse", "gap")


class SweepRow(BaseModel):
    """Achievable and converse loads at one cache size."""
    M: float = Field(..., ge=0.0)
    beta_ach: float
    achievable: float
    beta_conv: float
    converse: float
    gap: float = Field(..., description="achievable / converse, 1 when both vanish")


class Sandwich(BaseModel):
    """Loads around the optimal converse split ``beta_star``."""
    beta_star: float
    lower: float = Field(..., description="Optimised converse value")
    achievable: float = Field(..., description="Worst symmetric load at beta_star")
    upper: float = Field(..., description="f_c(t_c) + f_u(t_u) at beta_star")
    alpha_star: int


class WorstCaseResult(BaseModel):
    """Heaviest demand found by simulating every demand of a class."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    demand: Demand
    load: Fraction
    alpha_profile: Tuple[int, ...]
    symmetric_max: Fraction = Field(..., description="Largest load over symmetric alpha")
    demands_checked: int

    @property
    def asymmetric_excess(self) -> bool:
        """True when the heaviest demand beats every symmetric one."""
        return self.load > self.symmetric_max
