"""
Validators module.

This module provides validation helpers for geometry vectors, probabilities and
enumerated options. They are used by the domain types and by the command line
front end so that bad parameters are rejected with a message naming the
offending parameter before any voxel work starts.
"""

import math


def validate_enum(name, allowed_values):
    """
    Create a validator function that checks if a value is in an allowed set.

    Args:
        name (str): Name of the parameter being validated
            (used in error messages)
        allowed_values (list): List of allowed values for the parameter

    Returns:
        function: A validator function that raises ValueError if the input is
            invalid

    Example:
        >>> validate_kind = validate_enum("kind", ["image", "label"])
        >>> validate_kind("label")  # No error
        >>> validate_kind("mesh")  # Raises ValueError
    """
    allowed = set(allowed_values)

    def validator(value):
        if value not in allowed:
            raise ValueError(
                f"{name} must be one of: {', '.join(sorted(map(str, allowed)))}"
            )
        return value

    return validator


def validate_vector(name, values, length=3, positive=False, integer=False):
    """
    Validate a fixed-length numeric vector and return it as a tuple.

    Args:
        name (str): Parameter name used in error messages
        values (iterable): The numbers to check
        length (int): Required number of components
        positive (bool): Require every component to be > 0
        integer (bool): Require integral components (returned as ``int``)

    Returns:
        tuple: The validated components

    Raises:
        ValueError: If the vector has the wrong length or bad components
    """
    try:
        parts = list(values)
    except TypeError:
        raise ValueError(f"{name} must be a sequence of {length} numbers")

    if len(parts) != length:
        raise ValueError(
            f"{name} must have {length} components, got {len(parts)}"
        )

    result = []
    for i, value in enumerate(parts):
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValueError(f"{name}[{i}] should be a valid number")
        if not math.isfinite(number):
            raise ValueError(f"{name}[{i}] must be finite")
        if integer:
            if number != int(number):
                raise ValueError(f"{name}[{i}] must be an integer")
            number = int(number)
        if positive and number <= 0:
            raise ValueError(f"{name}[{i}] must be positive, got {value}")
        result.append(number)
    return tuple(result)


def validate_range(name, value, low=None, high=None, high_inclusive=True):
    """Check that ``low <= value <= high`` (or ``< high``) and return it."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    if low is not None and value < low:
        raise ValueError(f"{name} must be >= {low}, got {value}")
    if high is not None:
        if high_inclusive and value > high:
            raise ValueError(f"{name} must be <= {high}, got {value}")
        if not high_inclusive and value >= high:
            raise ValueError(f"{name} must be < {high}, got {value}")
    return value


def validate_probability(name, value):
    """Validate a probability in the closed interval [0, 1]."""
    return validate_range(name, value, 0.0, 1.0)
