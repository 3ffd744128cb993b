"""
hetcache - Logging Configuration

Configures the standard logging tree once per process. Records go to stderr so
that stdout carries only reports (numbers, JSON, CSV).
"""
import logging
import logging.config
from typing import Optional

from hetcache.core.config import settings


_configured = False


def setup_logging(level: Optional[str] = None, force: bool = False) -> None:
    """
    Configure the ``hetcache`` logger hierarchy.

    Args:
        level: Override for ``settings.LOG_LEVEL``
        force: Reconfigure even if logging was already set up
    """
    global _configured
    if _configured and not force:
        return

    log_level = (level or settings.LOG_LEVEL).upper()
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "default": {"format": settings.LOG_FORMAT},
            },
            "handlers": {
                "stderr": {
                    "class": "logging.StreamHandler",
                    "formatter": "default",
                    "stream": "ext://sys.stderr",
                },
            },
            "loggers": {
                "hetcache": {
                    "handlers": ["stderr"],
                    "level": log_level,
                    "propagate": True,
                },
            },
        }
    )
    _configured = True
    logging.getLogger(__name__).debug(f"Logging configured at level {log_level}")
