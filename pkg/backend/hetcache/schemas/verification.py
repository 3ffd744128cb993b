"""
Verification Schemas
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from hetcache.schemas.system import SystemConfig


class SuiteResult(BaseModel):
    """Outcome of one verification suite."""
    name: str
    passed: bool
    checks: int = Field(0, ge=0, description="Individual assertions evaluated")
    detail: Optional[str] = Field(None, description="First failure, if any")
    data: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    """All suites run against one configuration and split."""
    config: SystemConfig
    beta: float
    seeds: List[int]
    suites: List[SuiteResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)

    @property
    def first_failure(self) -> Optional[SuiteResult]:
        return next((suite for suite in self.suites if not suite.passed), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "config": self.config.to_json_dict(),
            "beta": self.beta,
            "seeds": self.seeds,
            "suites": [suite.model_dump() for suite in self.suites],
        }
