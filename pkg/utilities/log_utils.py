"""
Logging utilities for the detection toolkit.

This module provides functions to configure and manage logging for the command
line front end and the pipeline runner. It sets up both file and console
logging with customizable log levels and formats. Console output goes to
stderr so that machine readable results on stdout stay clean.

Typical usage:
    logger = configure_logging(log_file="logs/run.log", level=logging.DEBUG)
    logger.info("Pipeline started")
    logger.error("Stage failed")
"""

import logging
import os
import sys

from utilities.tools.log_trim import trim_log_file

DEFAULT_LOG_FILE = os.path.join("logs", "detection_toolkit.log")
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def configure_logging(log_file=None, level=logging.INFO, max_size_mb=10):
    """
    Configure logging for the toolkit.

    Sets up a logging system that writes to both a file and the console. Creates
    the log directory if it doesn't exist. Oversized log files are trimmed
    before the file handler is attached.

    Parameters:
        log_file (str): Path to the log file. If None, defaults to
                       "logs/detection_toolkit.log" in the current directory.
                       An empty string disables file logging.
        level (int): Logging level threshold (``logging.DEBUG`` ...
                    ``logging.CRITICAL``). Defaults to logging.INFO.
        max_size_mb (int): Maximum log file size in MB before trimming.
                          Defaults to 10MB.

    Returns:
        logging.Logger: The root logger with the configured handlers.
    """
    if log_file is None:
        log_file = DEFAULT_LOG_FILE

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        # Keep the log file manageable
        max_size_bytes = max_size_mb * 1024 * 1024
        if (
            os.path.exists(log_file)
            and os.path.getsize(log_file) > max_size_bytes
        ):
            trim_log_file(log_file, max_size=max_size_bytes)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=handlers,
    )
    root = logging.getLogger("")
    root.setLevel(level)
    logging.debug("Logging setup complete.")
    return root


def get_logger(name, level=None):
    """
    Get a logger configured with proper formatting.

    Args:
        name (str): Logger name (usually __name__)
        level (str, optional): Logging level
                               (DEBUG, INFO, WARNING, ERROR, CRITICAL).
                               If None the logger inherits from the root.

    Returns:
        logging.Logger: Configured logger
    """
    logger = logging.getLogger(name)

    if level is not None:
        numeric_level = getattr(logging, level.upper(), logging.INFO)
        logger.setLevel(numeric_level)

    return logger
