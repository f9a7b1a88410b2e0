"""Shared numeric helpers used across the toolkit."""

import math


def round_half_away(value):
    """Round to the nearest integer, ties away from zero (platform stable)."""
    if value >= 0:
        return int(math.floor(value + 0.5))
    return -int(math.floor(-value + 0.5))


def format_float(value):
    """Shortest round-tripping text for a float (``repr`` of the double)."""
    return repr(float(value))


__all__ = ["round_half_away", "format_float"]
