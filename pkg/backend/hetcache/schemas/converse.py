"""
Converse Schemas

Genie-aided caches, memory profiles extracted from uncoded placements, and
the reports produced by the counting checks and the converse chain.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hetcache.schemas.system import SubfileKey


class GenieCache(BaseModel):
    """
    Composite cache of a virtual user built along a user permutation.

    ``retained`` maps each kept subfile to its size; ``position`` records the
    permutation position whose cache contributed it.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    order: Tuple[int, ...]
    retained: Dict[SubfileKey, Fraction] = Field(default_factory=dict)
    position: Dict[SubfileKey, int] = Field(default_factory=dict)

    @property
    def total_size(self) -> Fraction:
        return sum(self.retained.values(), Fraction(0))


class MemoryProfile(BaseModel):
    """
    Fraction of library bits cached by exactly ``t'`` users.

    ``x_c[t']`` covers the common files; ``x_u_ti[(t', i)]`` covers unique
    files cached by ``t'`` users of whom ``i`` belong to the file's own group,
    summed over groups; ``x_u[t'] = sum_i x_u_ti[(t', i)] / G``.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x_c: List[Fraction]
    x_u: List[Fraction]
    x_u_ti: Dict[Tuple[int, int], Fraction]
    beta_hat: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def validate_mass(self) -> "MemoryProfile":
        if len(self.x_c) != len(self.x_u):
            raise ValueError("x_c and x_u must cover the same cardinalities")
        if sum(self.x_c) != 1 or sum(self.x_u) != 1:
            raise ValueError("memory profiles must carry unit mass")
        return self

    @property
    def K(self) -> int:
        return len(self.x_c) - 1

    @property
    def mean_common(self) -> Fraction:
        return sum((t * x for t, x in enumerate(self.x_c)), Fraction(0))

    @property
    def mean_unique(self) -> Fraction:
        return sum((t * x for t, x in enumerate(self.x_u)), Fraction(0))


class CountedUniqueBound(BaseModel):
    """Unique-file counting bound: exact in the in-group count ``i``, and relaxed."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    exact: Fraction
    relaxed: Fraction


class GenieCountingReport(BaseModel):
    """Brute-force genie averages and appearance counts against their closed forms."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    demand_class: str = Field(..., serialization_alias="class")
    pairs_checked: int = Field(..., ge=0)
    brute_force: Fraction
    closed_form: Fraction
    max_abs_error: float = Field(0.0, ge=0.0)
    first_mismatch: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.first_mismatch is None

    def to_dict(self) -> Dict[str, object]:
        return {
            "class": self.demand_class,
            "pairs_checked": self.pairs_checked,
            "brute_force": str(self.brute_force),
            "closed_form": str(self.closed_form),
            "max_abs_error": self.max_abs_error,
            "first_mismatch": self.first_mismatch,
        }


class ChainStage(BaseModel):
    """One step of the converse argument evaluated on a concrete placement."""
    name: str
    value: float


class ConverseChain(BaseModel):
    """Stages of the converse argument, each expected not to exceed the previous."""
    stages: List[ChainStage]
    non_increasing: bool
    first_violation: Optional[str] = None
