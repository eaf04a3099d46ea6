"""
Logging helpers.

Every module grabs its logger with ``get_logger(__name__)``; the launcher calls
``configure_logging`` once. Set NSDQUAD_LOG_LEVEL=DEBUG for step timings.
"""

import logging
import os
import sys
from typing import Optional, TextIO, Union

LOG_LEVEL_ENV = "NSDQUAD_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_ROOT_NAME = "nsdquad"
_handler: Optional[logging.Handler] = None


def get_logger(name: str) -> logging.Logger:
    """Return a logger living under the package root logger."""
    if not name.startswith(_ROOT_NAME):
        name = f"{_ROOT_NAME}.{name}"
    return logging.getLogger(name)


def _resolve_level(level: Union[int, str, None]) -> int:
    env_level = os.environ.get(LOG_LEVEL_ENV)
    if env_level:
        level = env_level
    if level is None:
        return logging.WARNING
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(str(level).upper())
    return resolved if isinstance(resolved, int) else logging.WARNING


def configure_logging(level: Union[int, str, None] = None, stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Install (or replace) the single stderr handler on the package logger.

    Args:
        level: Level name or number; NSDQUAD_LOG_LEVEL wins when set
        stream: Output stream (default: sys.stderr)

    Returns:
        The package root logger
    """
    global _handler

    root = logging.getLogger(_ROOT_NAME)
    if _handler is not None:
        root.removeHandler(_handler)

    _handler = logging.StreamHandler(stream or sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(_handler)
    root.setLevel(_resolve_level(level))
    root.propagate = False
    return root
