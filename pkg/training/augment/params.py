"""
Random draws of augmentation parameters.

Drawing and applying are separate steps: :func:`draw_params` turns a scheme
and a seed into a concrete :class:`AugParams`, and the ``apply_*`` functions
are pure functions of a sample and those parameters.
"""

import itertools

import numpy as np
from attrs import field, frozen

from config.augmentation_schemes import INTENSITY_TRANSFORMS
from config.intensity_defaults import (
    INTENSITY_MAGNITUDES,
    ROTATION90_K,
    ROTATION90_PLANES,
)

IDENTITY_PERMUTATION = (0, 1, 2)
TRANSPOSITIONS = tuple(
    p for p in itertools.permutations(range(3)) if p != IDENTITY_PERMUTATION
)


def _optional_vector(value):
    return None if value is None else tuple(float(v) for v in value)


def _rotation90(value):
    if value is None:
        return None
    k, (a, b) = value
    k, a, b = int(k), int(a), int(b)
    if a == b or not {a, b} <= {0, 1, 2}:
        raise ValueError(
            f"rotation90 plane must be two distinct axes, got {(a, b)}"
        )
    return (k % 4, (a, b))


def _permutation(value):
    if value is None:
        return None
    value = tuple(int(v) for v in value)
    if sorted(value) != [0, 1, 2]:
        raise ValueError(
            f"transpose needs a permutation of (0, 1, 2), got {value}"
        )
    return value


def _mirror(value):
    axes = tuple(sorted({int(v) for v in value}))
    if not set(axes) <= {0, 1, 2}:
        raise ValueError(f"mirror axes must be in (0, 1, 2), got {axes}")
    return axes


def _intensity(value):
    order = {t: i for i, t in enumerate(INTENSITY_TRANSFORMS)}
    entries = [(str(t), float(m)) for t, m in value]
    for t, _ in entries:
        if t not in order:
            raise ValueError(f"unknown intensity transform '{t}'")
    return tuple(sorted(entries, key=lambda e: order[e[0]]))


@frozen
class AugParams:
    """
    Concrete augmentation parameters.

    Attributes:
        rotation: Angles in degrees about axes z, y and x, or ``None``.
        scale: Isotropic zoom factor, or ``None``.
        rotation90: ``(k, (axis_a, axis_b))`` quarter turns, or ``None``.
        transpose: Axis permutation (``np.transpose`` convention), or ``None``.
        mirror: Mirrored axes.
        intensity: ``(transform_id, magnitude)`` pairs in table row order.
        seed: Seed for the random fields of the intensity transforms.
    """

    rotation: tuple = field(default=None, converter=_optional_vector)
    scale: float = field(
        default=None, converter=lambda v: None if v is None else float(v)
    )
    rotation90: tuple = field(default=None, converter=_rotation90)
    transpose: tuple = field(default=None, converter=_permutation)
    mirror: tuple = field(default=(), converter=_mirror)
    intensity: tuple = field(default=(), converter=_intensity)
    seed: int = field(default=0, converter=int)

    @property
    def is_right_angle(self):
        """No continuous rotation and no scaling."""
        if self.rotation is not None and any(a != 0 for a in self.rotation):
            return False
        return self.scale in (None, 1.0)

    @property
    def is_spatial_identity(self):
        return (
            self.is_right_angle
            and (self.rotation90 is None or self.rotation90[0] == 0)
            and self.transpose in (None, IDENTITY_PERMUTATION)
            and not self.mirror
        )

    def to_dict(self):
        return {
            "rotation": None if self.rotation is None else list(self.rotation),
            "scale": self.scale,
            "rotation90": None
            if self.rotation90 is None
            else [self.rotation90[0], list(self.rotation90[1])],
            "transpose": (
                None if self.transpose is None else list(self.transpose)
            ),
            "mirror": list(self.mirror),
            "intensity": [[t, m] for t, m in self.intensity],
            "seed": self.seed,
        }


def _draw_magnitude(rng, magnitude, integer=False):
    low, high = magnitude
    if integer:
        return int(rng.integers(int(low), int(high) + 1))
    return float(rng.uniform(low, high))


def draw_params(scheme, rng_seed=None):
    """
    Draw concrete parameters from ``scheme``.

    Entries are visited in scheme order; each is included when a uniform draw
    falls below its probability, then its magnitude is drawn uniformly from
    its range. Mirroring is decided separately for every axis.

    Parameters:
        scheme (AugScheme): The scheme to draw from.
        rng_seed (int or numpy.random.Generator): Source of randomness.
    """
    rng = np.random.default_rng(rng_seed)
    values = {"mirror": (), "intensity": []}

    for entry in scheme.entries:
        t = entry.transform_id
        if t == "mirror":
            values["mirror"] = tuple(
                axis for axis in range(3) if rng.random() < entry.probability
            )
            continue
        if not rng.random() < entry.probability:
            continue
        if t == "rotation":
            values["rotation"] = tuple(
                _draw_magnitude(rng, entry.magnitude) for _ in range(3)
            )
        elif t == "scaling":
            values["scale"] = _draw_magnitude(rng, entry.magnitude)
        elif t == "rotation90":
            k = ROTATION90_K[int(rng.integers(len(ROTATION90_K)))]
            plane = ROTATION90_PLANES[int(rng.integers(len(ROTATION90_PLANES)))]
            values["rotation90"] = (k, plane)
        elif t == "transpose":
            values["transpose"] = TRANSPOSITIONS[
                int(rng.integers(len(TRANSPOSITIONS)))
            ]
        else:
            magnitude = _draw_magnitude(
                rng,
                entry.magnitude or INTENSITY_MAGNITUDES[t],
                integer=t == "median_filter",
            )
            values["intensity"].append((t, magnitude))

    values["seed"] = int(rng.integers(2**63))
    return AugParams(**values)
