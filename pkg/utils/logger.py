"""
Logger utility with proper formatting.
"""
import logging
import os
import sys

from config import LOG_FORMAT, LOG_LEVEL


def setup_logger(name: str = "superder") -> logging.Logger:
    """
    Set up and configure logger instance.

    Reports go to stdout, so log records are written to stderr. The level is read
    from the environment at call time, after .env has been loaded.

    Args:
        name: Logger name; an empty string configures the root logger

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name or None)
    level = os.getenv("LOG_LEVEL", LOG_LEVEL)
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    # Add handler if not already added
    if not logger.handlers:
        logger.addHandler(console_handler)

    return logger
