"""
Centralized logging configuration
Configures logging once at application startup using Rich.
"""

import logging
import sys

from rich.console import Console
from rich.logging import RichHandler
from rich.traceback import install as install_rich_traceback


def configure_logging(
    level: int = logging.INFO,
    rich_tracebacks: bool = True,
    show_time: bool = True,
    show_path: bool = False,
    markup: bool = False
) -> None:
    """
    Configure logging for the application using Rich.
    Should be called once at application startup.

    Log records go to stderr: stdout is reserved for CSV and JSON payloads
    so that command output can be piped or redirected unchanged.

    Args:
        level: Logging level (default: INFO)
        rich_tracebacks: Enable rich traceback formatting (default: True)
        show_time: Show timestamps in log messages (default: True)
        show_path: Show file path in log messages (default: False)
        markup: Enable rich markup in log messages (default: False)
    """
    # Only configure if not already configured
    root_logger = logging.getLogger()
    if root_logger.handlers:
        root_logger.setLevel(level)
        for handler in root_logger.handlers:
            handler.setLevel(level)
        return

    if rich_tracebacks:
        install_rich_traceback(show_locals=False, suppress=[logging])

    console = Console(file=sys.stderr, width=None)

    rich_handler = RichHandler(
        console=console,
        show_time=show_time,
        show_path=show_path,
        markup=markup,
        rich_tracebacks=rich_tracebacks,
        tracebacks_show_locals=False,
        show_level=True
    )
    rich_handler.setLevel(level)

    root_logger.setLevel(level)
    root_logger.addHandler(rich_handler)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger for a module.
    Use this instead of logging.getLogger() to ensure consistent configuration.

    Args:
        name: Logger name (typically a short dotted module name)

    Returns:
        Configured logger instance
    """
    return logging.getLogger(name)


def resolve_level(verbose: bool = False, quiet: bool = False, default: str = "INFO") -> int:
    """
    Pick the logging level from the CLI flags, falling back to a level name.

    --verbose wins over --quiet.

    Raises:
        ValueError: If default is not a standard level name
    """
    if verbose:
        return logging.DEBUG
    if quiet:
        return logging.WARNING
    level = logging.getLevelName(default.upper())
    if not isinstance(level, int):
        raise ValueError(f"Unknown logging level {default!r}")
    return level
