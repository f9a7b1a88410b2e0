"""
Tools package.

This package provides maintenance helpers such as log trimming.
"""

from utilities.tools.log_trim import trim_log_file

__all__ = ["trim_log_file"]
