"""
IO utilities package.

This package provides the thread pool used to fan per-image work out while
keeping results in input order.
"""

from utilities.io.worker_pool import default_worker_count, map_in_order

__all__ = ["default_worker_count", "map_in_order"]
