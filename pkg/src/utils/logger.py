"""
Centralized Logging Utility.

Provides a consistent logger configuration across the simulator.
All modules should obtain loggers via this utility; pure operation
modules (genome, kernel, valuation, detectors) do not log at all.
"""

import logging
from typing import Optional

ROOT_LOGGER_NAME = "cultural_market"


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a configured logger instance.

    Args:
        name: Optional logger name (module or component). Names are
              nested under the root simulator logger.

    Returns:
        logging.Logger
    """
    root = logging.getLogger(ROOT_LOGGER_NAME)

    if not root.handlers:
        root.setLevel(logging.INFO)

        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
        )
        handler.setFormatter(formatter)

        root.addHandler(handler)
        root.propagate = False

    if not name:
        return root
    return root.getChild(name)


def set_log_level(level: str) -> None:
    """Set the level of the simulator root logger (e.g. "DEBUG")."""
    resolved = logging.getLevelName(level.upper())
    if not isinstance(resolved, int):
        raise ValueError(f"Unknown log level: {level}")
    get_logger().setLevel(resolved)
