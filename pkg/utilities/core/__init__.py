"""
Core utilities package.

Numeric helpers used across the toolkit.
"""

from utilities.core.shared_utils import format_float, round_half_away

__all__ = ["round_half_away", "format_float"]
