"""Logging configuration for wecsim."""

import contextvars
import logging
import os
from collections.abc import Iterator
from contextlib import contextmanager

_run_label: contextvars.ContextVar[str] = contextvars.ContextVar("wecsim_run", default="-")
_sim_time: contextvars.ContextVar[float] = contextvars.ContextVar("wecsim_sim_time", default=0.0)

LOG_LEVEL_ENV = "WECSIM_LOG_LEVEL"


class RunContextFilter(logging.Filter):
    """
    Log filter that stamps records with the active run label and simulated time.

    The values come from context variables, so sweeps that execute runs in
    worker threads keep their labels apart.

    Example:
        >>> handler = logging.StreamHandler()
        >>> handler.addFilter(RunContextFilter())
        >>> handler.setFormatter(logging.Formatter("%(run)s t=%(sim_time).3f %(message)s"))
    """

    def filter(self, record: logging.LogRecord) -> bool:
        """
        Attach ``run`` and ``sim_time`` attributes to the record.

        Args:
            record: The log record to annotate

        Returns:
            True (never drops a record)
        """
        record.run = _run_label.get()
        record.sim_time = _sim_time.get()
        return True


@contextmanager
def run_context(label: str) -> Iterator[None]:
    """Bind ``label`` as the run name for log records emitted inside the block."""
    token = _run_label.set(label)
    time_token = _sim_time.set(0.0)
    try:
        yield
    finally:
        _sim_time.reset(time_token)
        _run_label.reset(token)


def set_sim_time(t: float) -> None:
    """Update the simulated time reported by :class:`RunContextFilter`."""
    _sim_time.set(t)


logger = logging.getLogger("wecsim")

# Default to INFO level, can be overridden by application
logger.setLevel(logging.INFO)

logger.propagate = True

logger.addFilter(RunContextFilter())


def set_log_level(level: str) -> None:
    """
    Set logging level for wecsim.

    Args:
        level: One of "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"

    Example:
        from wecsim.log import set_log_level
        set_log_level("DEBUG")  # log every MPPT decision
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {level}")

    logger.setLevel(numeric_level)
    logger.info(f"wecsim log level set to {level.upper()}")


def configure_from_env() -> str | None:
    """Apply ``WECSIM_LOG_LEVEL`` if set; returns the level applied."""
    level = os.environ.get(LOG_LEVEL_ENV)
    if level:
        set_log_level(level)
    return level
