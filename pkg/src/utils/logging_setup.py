"""
Logging configuration shared by the CLI and the tool server
"""
import logging
import sys
from typing import Optional

import structlog

from src.config.settings import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_structlog_ready = False

def _ensure_structlog() -> None:
    """Route structlog events into stdlib logging (never stdout)"""
    global _structlog_ready
    if _structlog_ready:
        return
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.processors.KeyValueRenderer(key_order=["event"], sort_keys=True),
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    _structlog_ready = True

def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Configure stdlib logging on stderr (plus optional file) and route
    structlog events through the same handlers.
    """
    level_name = (level or settings.LOG_LEVEL).upper()
    handlers = [logging.StreamHandler(sys.stderr)]
    target = log_file or settings.LOG_FILE
    if target:
        handlers.append(logging.FileHandler(target))

    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )
    _ensure_structlog()

def get_event_logger(name: str):
    """Bound structlog logger for solver event streams"""
    _ensure_structlog()
    return structlog.get_logger(name)
