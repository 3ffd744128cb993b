"""
System Model Schemas

Pydantic models for the caching system: configuration, file identities,
demand vectors and the uncoded placement (a partition of every file into
subfiles indexed by the set of users caching them).
"""
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from hetcache.core.exceptions import DomainError


class FileKind(str, Enum):
    """Files every user may request versus files reserved for one group."""
    COMMON = "common"
    UNIQUE = "unique"


FILE_KIND_ALIASES: Dict[str, FileKind] = {
    "c": FileKind.COMMON,
    "common": FileKind.COMMON,
    "u": FileKind.UNIQUE,
    "unique": FileKind.UNIQUE,
}


class SystemConfig(BaseModel):
    """The tuple (K, G, Nc, Nu, M, B). Domain rules are checked by ``validate_config``."""
    model_config = ConfigDict(frozen=True)

    K: int = Field(..., ge=1, description="Number of users")
    G: int = Field(..., ge=1, description="Number of groups")
    Nc: int = Field(..., ge=1, description="Number of common files")
    Nu: int = Field(..., ge=1, description="Number of unique files per group")
    M: float = Field(..., description="Cache size per user, in files")
    B: int = Field(720, ge=1, description="File size in bits (simulation only)")

    @property
    def N(self) -> int:
        """Library size."""
        return self.Nc + self.G * self.Nu

    @property
    def users_per_group(self) -> int:
        return self.K // self.G

    @property
    def users(self) -> Tuple[int, ...]:
        return tuple(range(1, self.K + 1))

    def group_of(self, k: int) -> int:
        """Contiguous blocks: ``g(k) = ceil(k G / K)``."""
        return -(-k * self.G // self.K)

    def group_users(self, g: int) -> Tuple[int, ...]:
        size = self.users_per_group
        return tuple(range((g - 1) * size + 1, g * size + 1))

    def with_memory(self, M: float) -> "SystemConfig":
        return self.model_copy(update={"M": float(M)})

    def to_json_dict(self) -> Dict[str, float]:
        return {"K": self.K, "G": self.G, "Nc": self.Nc, "Nu": self.Nu, "M": self.M, "B": self.B}


class FileId(BaseModel):
    """Reference to a common file or to a unique file of one group."""
    model_config = ConfigDict(frozen=True)

    kind: FileKind
    index: int = Field(..., ge=1, description="File index n within its class (1-based)")
    group: Optional[int] = Field(None, ge=1, description="Owning group (unique files only)")

    @model_validator(mode="after")
    def validate_group(self) -> "FileId":
        if self.kind == FileKind.COMMON and self.group is not None:
            raise ValueError("common files carry no group")
        if self.kind == FileKind.UNIQUE and self.group is None:
            raise ValueError("unique files need a group")
        return self

    @classmethod
    def common(cls, index: int) -> "FileId":
        return cls(kind=FileKind.COMMON, index=index)

    @classmethod
    def unique(cls, index: int, group: int) -> "FileId":
        return cls(kind=FileKind.UNIQUE, index=index, group=group)

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        if self.kind == FileKind.COMMON:
            return (0, 0, self.index)
        return (1, self.group or 0, self.index)

    @property
    def label(self) -> str:
        if self.kind == FileKind.COMMON:
            return f"Wc[{self.index}]"
        return f"Wu{self.group}[{self.index}]"


SubfileKey = Tuple[FileId, int]


def subfile_label(key: SubfileKey) -> str:
    """Readable subfile name, e.g. ``Wc[1]{2,3}``."""
    file_id, mask = key
    users = [str(bit + 1) for bit in range(mask.bit_length()) if mask >> bit & 1]
    return f"{file_id.label}{{{','.join(users)}}}"


class Demand(BaseModel):
    """
    Demand vector: ``requests[k-1]`` is the file requested by user ``k``.

    Unique requests are already resolved to the requesting user's group.
    """
    model_config = ConfigDict(frozen=True)

    requests: Tuple[FileId, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def validate_distinct(self) -> "Demand":
        if len(set(self.requests)) != len(self.requests):
            raise ValueError("requested files must be pairwise distinct")
        return self

    @classmethod
    def from_pairs(cls, cfg: SystemConfig, pairs: List[Tuple[int, str]]) -> "Demand":
        """
        Build from ``(d_k, f_k)`` pairs with ``f_k`` in {"c", "u", "common", "unique"}.

        Raises:
            DomainError: an unknown file kind
        """
        requests = []
        for k, (index, kind) in enumerate(pairs, start=1):
            resolved = FILE_KIND_ALIASES.get(kind.value if isinstance(kind, FileKind) else kind)
            if resolved is None:
                raise DomainError(f"user {k} requests unknown file kind {kind!r}", user=k, kind=kind)
            if resolved == FileKind.COMMON:
                requests.append(FileId.common(index))
            else:
                requests.append(FileId.unique(index, cfg.group_of(k)))
        return cls(requests=tuple(requests))

    def file_of(self, k: int) -> FileId:
        return self.requests[k - 1]

    @property
    def unique_requesters(self) -> Tuple[int, ...]:
        return tuple(k for k, f in enumerate(self.requests, start=1) if f.kind == FileKind.UNIQUE)

    def to_records(self) -> List[Dict[str, object]]:
        return [
            {"user": k, "kind": f.kind.value, "index": f.index}
            for k, f in enumerate(self.requests, start=1)
        ]


class PlacementSpec(BaseModel):
    """
    Uncoded placement: subfile sizes as fractions of B, keyed by (file, user mask).

    ``payloads`` holds the subfile bits (``uint8`` arrays of 0/1) when the
    placement was built from a simulated library.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: SystemConfig
    sizes: Dict[SubfileKey, Fraction] = Field(default_factory=dict)
    payloads: Optional[Dict[SubfileKey, np.ndarray]] = None

    _by_file: Dict[FileId, List[Tuple[int, Fraction]]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        index: Dict[FileId, List[Tuple[int, Fraction]]] = {}
        for (file_id, mask), size in self.sizes.items():
            index.setdefault(file_id, []).append((mask, size))
        for entries in index.values():
            entries.sort(key=lambda entry: entry[0])
        self._by_file = index

    def subfiles(self, file_id: FileId) -> List[Tuple[int, Fraction]]:
        """``(mask, size)`` pairs of one file, ordered by mask."""
        return self._by_file.get(file_id, [])

    def files(self) -> List[FileId]:
        return sorted(self._by_file, key=lambda f: f.sort_key)

    def cache_of(self, k: int) -> Dict[SubfileKey, Fraction]:
        """Subfiles stored by user ``k``."""
        bit = 1 << (k - 1)
        return {key: size for key, size in self.sizes.items() if key[1] & bit}

    def user_memory(self, k: int) -> Fraction:
        return sum(self.cache_of(k).values(), Fraction(0))

    def without(self, key: SubfileKey) -> "PlacementSpec":
        """Copy with one subfile removed."""
        sizes = {k: v for k, v in self.sizes.items() if k != key}
        payloads = None
        if self.payloads is not None:
            payloads = {k: v for k, v in self.payloads.items() if k != key}
        return PlacementSpec(config=self.config, sizes=sizes, payloads=payloads)


class ValidationReport(BaseModel):
    """Outcome of a configuration or placement check."""
    valid: bool = Field(..., description="True when no invariant is violated")
    violations: List[str] = Field(default_factory=list, description="Violated invariants, in check order")
