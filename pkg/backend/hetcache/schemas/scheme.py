"""
Delivery Scheme Schemas

Split parameters of the two-part placement, multicast messages, the
transmission they form, and the view of one user's cache used for decoding.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from hetcache.core.exceptions import DomainError
from hetcache.schemas.system import FileId, FileKind, SubfileKey


class SplitParams(BaseModel):
    """Memory split ``beta`` and the induced placement parameters ``t_c``, ``t_u``."""
    model_config = ConfigDict(frozen=True)

    beta: float = Field(..., ge=0.0, le=1.0, description="Fraction of each cache holding common files")
    t_c: float = Field(..., ge=0.0, description="K beta M / N_c")
    t_u: float = Field(..., ge=0.0, description="K (1 - beta) M / (G N_u)")

    @property
    def is_integral(self) -> bool:
        return float(self.t_c).is_integer() and float(self.t_u).is_integer()

    def integral(self) -> Tuple[int, int]:
        """``(t_c, t_u)`` as integers; simulation needs whole subsets."""
        if not self.is_integral:
            raise DomainError(
                "simulation needs integer t_c and t_u",
                beta=self.beta, t_c=self.t_c, t_u=self.t_u,
            )
        return int(self.t_c), int(self.t_u)


class Message(BaseModel):
    """
    One multicast message: the XOR of one subfile per interested user in ``subset``.

    ``constituents`` pairs each interested user with the subfile it is missing.
    ``size`` is the largest constituent size; ``payload`` holds the zero-padded
    XOR when the placement carries bits.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    phase: FileKind
    group: Optional[int] = None
    subset: int = Field(..., ge=1, description="Target users as a bitmask")
    size: Fraction
    constituents: List[Tuple[int, SubfileKey]]
    payload: Optional[np.ndarray] = None

    @property
    def users(self) -> List[int]:
        return [k for k in range(1, self.subset.bit_length() + 1) if self.subset >> (k - 1) & 1]


class Transmission(BaseModel):
    """Ordered multicast messages sent for one demand."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    messages: List[Message] = Field(default_factory=list)

    @property
    def total_load(self) -> Fraction:
        """Normalised load in units of B."""
        return sum((m.size for m in self.messages), Fraction(0))

    def to_records(self) -> List[Dict[str, object]]:
        """Debug dump: ``{subset, size_num, size_den}`` per message."""
        return [
            {"subset": m.users, "size_num": m.size.numerator, "size_den": m.size.denominator}
            for m in self.messages
        ]


class UserCache(BaseModel):
    """Bits stored by one user plus the public subfile layout of every file."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    user: int = Field(..., ge=1)
    file_size_bits: int = Field(..., ge=1)
    contents: Dict[SubfileKey, np.ndarray] = Field(default_factory=dict)
    layout: Dict[FileId, List[Tuple[int, Fraction]]] = Field(default_factory=dict)

    def bit_length(self, size: Fraction) -> int:
        return int(size * self.file_size_bits)
