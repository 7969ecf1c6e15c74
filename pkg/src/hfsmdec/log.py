"""Logging configuration with verbosity levels.

Results go to standard output; everything written through this logger goes
to standard error.
"""

from __future__ import annotations

import logging
import sys
import time
from contextlib import contextmanager
from typing import Iterator

LOG_NAME = "hfsmdec"

# -q -> 0 silent, -v -> 1 warnings, default 2 info, -vvv -> 3 debug
VERBOSITY_MAP: dict[int, int] = {
    0: logging.CRITICAL + 1,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}

_TERSE_FORMAT = "%(levelname)s: %(message)s"
_DEBUG_FORMAT = "%(levelname)s [%(name)s] %(message)s"


def verbosity_from_flags(quiet: bool, verbose: int) -> int:
    """Map ``-q`` and repeated ``-v`` onto a verbosity level."""
    if quiet:
        return 0
    if verbose > 0:
        return verbose
    return 2


def setup_logging(verbosity: int) -> logging.Logger:
    """Configure and return the application logger.

    The stderr handler is rebuilt on every call so that it always writes to
    the current ``sys.stderr`` (which test harnesses swap out).
    """
    level = VERBOSITY_MAP.get(
        verbosity,
        logging.DEBUG if verbosity > 3 else logging.CRITICAL + 1,
    )
    logger = logging.getLogger(LOG_NAME)
    logger.setLevel(level)
    for old in list(logger.handlers):
        logger.removeHandler(old)
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(
        logging.Formatter(_DEBUG_FORMAT if level <= logging.DEBUG else _TERSE_FORMAT)
    )
    logger.addHandler(handler)
    return logger


def get_logger() -> logging.Logger:
    """Get the application logger."""
    return logging.getLogger(LOG_NAME)


@contextmanager
def log_timing(label: str) -> Iterator[None]:
    """Log the wall-clock duration of the enclosed block at DEBUG."""
    logger = get_logger()
    started = time.perf_counter()
    try:
        yield
    finally:
        logger.debug("%s took %.3f s", label, time.perf_counter() - started)
