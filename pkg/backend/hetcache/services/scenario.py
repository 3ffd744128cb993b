"""
Scenario Service

Loads and validates scenario files, and resolves the cache-size grid they ask for.
"""
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import orjson
from pydantic import ValidationError

from hetcache.core.config import settings
from hetcache.core.exceptions import ConfigurationError, EnumerationCapExceeded
from hetcache.schemas.scenario import ScenarioFile, ScenarioMode
from hetcache.services.analysis import default_memory_grid
from hetcache.services.system_model import DemandClass, require_pair_cap, require_valid


logger = logging.getLogger(__name__)


def parse_scenario(raw: Union[bytes, str]) -> ScenarioFile:
    """
    Parse scenario JSON.

    Raises:
        ConfigurationError: malformed JSON, schema violations, an invalid system,
            or a simulate-mode instance too large to enumerate exhaustively
    """
    try:
        data = orjson.loads(raw)
    except orjson.JSONDecodeError as exc:
        raise ConfigurationError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("scenario must be a JSON object")

    system = data.get("system")
    if isinstance(system, dict) and "B" not in system:
        data["system"] = {**system, "B": settings.DEFAULT_FILE_SIZE_BITS}

    try:
        scenario = ScenarioFile.model_validate(data)
    except ValidationError as exc:
        violations = [
            f"{'.'.join(str(p) for p in error['loc'])}: {error['msg']}" for error in exc.errors()
        ]
        raise ConfigurationError("scenario does not match the schema", violations=violations) from exc

    require_valid(scenario.system)
    if scenario.mode == ScenarioMode.SIMULATE:
        try:
            require_pair_cap(scenario.system, DemandClass.ALL)
        except EnumerationCapExceeded as exc:
            raise ConfigurationError(
                "simulate mode needs an instance within the enumeration cap",
                violations=[exc.detail],
                cardinality=exc.cardinality,
                cap=exc.cap,
            ) from exc
    return scenario


def load_scenario(path: Union[str, Path]) -> ScenarioFile:
    """Read and parse a scenario file."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario {path}: {exc}", path=str(path)) from exc
    scenario = parse_scenario(raw)
    logger.debug(f"Loaded scenario {path}: {scenario.system.to_json_dict()}")
    return scenario


def memory_grid(scenario: ScenarioFile) -> List[float]:
    """Cache sizes a sweep should visit."""
    cfg = scenario.system
    if scenario.grid is None:
        return default_memory_grid(cfg)
    if isinstance(scenario.grid, int):
        return [float(m) for m in np.linspace(0.0, cfg.Nc + cfg.Nu, scenario.grid)]
    return [float(m) for m in scenario.grid]
