"""
Scenario Schemas

JSON scenario files consumed by the command-line front end.
"""
from enum import Enum
from typing import List, Optional, Union

from pydantic import BaseModel, Field, field_validator

from hetcache.core.config import settings
from hetcache.schemas.system import SystemConfig


class ScenarioMode(str, Enum):
    ANALYTIC = "analytic"
    SIMULATE = "simulate"


class ScenarioFile(BaseModel):
    """
    A system configuration plus what to do with it.

    ``grid`` is either an explicit list of cache sizes or a number of uniform
    points on ``[0, N_c + N_u]``; when omitted, sweeps use the default grid.
    """
    system: SystemConfig
    grid: Optional[Union[List[float], int]] = None
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    mode: ScenarioMode = Field(
        ScenarioMode.ANALYTIC,
        description="simulate requires every (demand, user order) pair to fit the enumeration cap",
    )
    beta: Optional[float] = Field(None, ge=0.0, le=1.0, description="Memory split for simulation")

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        return v

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, v):
        if isinstance(v, int) and v < 0:
            raise ValueError("grid point count must be non-negative")
        return v
