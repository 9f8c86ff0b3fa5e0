"""
Logging utility for the SGT project

Usage:
    from config.logger import get_logger

    logger = get_logger(__name__)

    logger.debug("Debug message")
    logger.info("Info message")
    logger.warning("Warning message")
    logger.error("Error message")

    # With exception tracking
    try:
        # code
    except SGTError:
        logger.error("Something went wrong", exc_info=True)
        raise
"""

import logging
import time
from contextlib import contextmanager


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for the given module name.

    Args:
        name: The name of the module (typically __name__)

    Returns:
        logging.Logger: Configured logger instance
    """
    return logging.getLogger(name)


@contextmanager
def log_duration(logger: logging.Logger, label: str, level: int = logging.INFO):
    """Log how long the wrapped block took."""
    start = time.perf_counter()
    yield
    logger.log(level, f"{label} finished in {time.perf_counter() - start:.3f}s")

