"""
Log Trim module.

Keeps pipeline log files bounded. Long sweeps over many volumes produce a lot
of DEBUG output; trimming keeps the most recent part, starting on a whole line
so the first kept record is not cut in half.
"""

import logging
import os

logger = logging.getLogger(__name__)


def trim_log_file(log_file, max_size=1024 * 1024):
    """
    Trim the log file so it does not exceed ``max_size`` bytes.

    The newest entries (at the end of the file) are kept. The kept region
    starts after the first newline inside the tail window, unless the window
    holds a single line, in which case the raw tail is kept.

    Parameters:
        log_file (str): Path to the log file to be trimmed.
        max_size (int, optional): Maximum size in bytes for the log file.
                                  Defaults to 1MB (1024 * 1024 bytes).

    Returns:
        int: Size of the file after trimming (0 when the file is missing).

    Note:
        Errors are logged, not raised; the file is left unchanged.
    """
    if not os.path.exists(log_file):
        return 0

    try:
        with open(log_file, "rb") as f:
            f.seek(0, 2)
            size = f.tell()
            if size <= max_size:
                return size
            f.seek(-max_size, 2)
            data = f.read()
        newline = data.find(b"\n")
        if 0 <= newline < len(data) - 1:
            data = data[newline + 1:]
        with open(log_file, "wb") as f:
            f.write(data)
        logger.info(f"Trimmed log file {log_file} to {len(data)} bytes.")
        return len(data)
    except OSError as e:
        logger.error(f"Error trimming log file {log_file}: {e}")
        return os.path.getsize(log_file)
