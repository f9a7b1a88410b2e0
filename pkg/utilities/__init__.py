"""
Utilities Package.

This package provides the shared plumbing of the toolkit: logging setup,
exceptions, parameter validators, the worker pool and the command line
front end.
"""

from utilities.errors import ToolkitError
from utilities.io.worker_pool import default_worker_count, map_in_order
from utilities.log_utils import configure_logging, get_logger
from utilities.validators import (
    validate_enum,
    validate_probability,
    validate_range,
    validate_vector,
)

# Only export specific names (instead of using __all__ = ['*'])
__all__ = [
    "configure_logging",
    "get_logger",
    "ToolkitError",
    "default_worker_count",
    "map_in_order",
    "validate_enum",
    "validate_probability",
    "validate_range",
    "validate_vector",
]
