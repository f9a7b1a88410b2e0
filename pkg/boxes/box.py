"""
Axis-aligned 3D boxes in continuous voxel coordinates.

Boxes are half-open: ``[min, max)`` per axis, with voxel ``v`` occupying
``[v, v + 1)``. IoU is computed on continuous volumes, which for integer
coordinates equals counting voxels.
"""

import numpy as np
from attrs import evolve, field, frozen

from utilities.errors import GeometryError
from utilities.validators import validate_probability, validate_vector


def _corner(values):
    return validate_vector("box corner", values)


def _score(value):
    return None if value is None else validate_probability("score", value)


def _label(value):
    if value is None:
        return None
    if int(value) != value or int(value) < 1:
        raise ValueError(f"box label must be a positive integer, got {value}")
    return int(value)


@frozen
class BoxF:
    """Half-open box ``[min, max)`` with an optional score and label."""

    min: tuple = field(converter=_corner)
    max: tuple = field(converter=_corner)
    score: float = field(default=None, converter=_score)
    label: int = field(default=None, converter=_label)

    def __attrs_post_init__(self):
        for axis, (lo, hi) in enumerate(zip(self.min, self.max)):
            if not lo < hi:
                raise GeometryError(
                    f"degenerate box on axis {axis}: min {lo} >= max {hi}"
                )

    @classmethod
    def from_array(cls, values, score=None, label=None):
        """Build from ``[min_z, min_y, min_x, max_z, max_y, max_x]``."""
        values = [float(v) for v in values]
        return cls(values[:3], values[3:], score=score, label=label)

    def as_array(self):
        return np.array(self.min + self.max, dtype=np.float64)

    @property
    def size(self):
        return tuple(hi - lo for lo, hi in zip(self.min, self.max))

    @property
    def center(self):
        return tuple((lo + hi) / 2.0 for lo, hi in zip(self.min, self.max))

    @property
    def volume(self):
        size = self.size
        return size[0] * size[1] * size[2]

    def sort_key(self):
        """Canonical order: score descending, then lexicographic corners."""
        score = -1.0 if self.score is None else self.score
        return (-score,) + self.min + self.max

    def with_score(self, score):
        return evolve(self, score=score)

    def translate(self, offset):
        offset = validate_vector("offset", offset)
        return evolve(
            self,
            min=[lo + d for lo, d in zip(self.min, offset)],
            max=[hi + d for hi, d in zip(self.max, offset)],
        )

    def clip(self, shape):
        """Clip to ``[0, shape)``; ``None`` if nothing remains."""
        lo = [max(v, 0.0) for v in self.min]
        hi = [min(v, float(n)) for v, n in zip(self.max, shape)]
        if any(a >= b for a, b in zip(lo, hi)):
            return None
        return evolve(self, min=lo, max=hi)

    def intersects_shape(self, shape):
        return all(
            hi > 0 and lo < n for lo, hi, n in zip(self.min, self.max, shape)
        )

    def contains(self, other):
        return all(
            a <= c and d <= b
            for a, b, c, d in zip(self.min, self.max, other.min, other.max)
        )


def iou(a, b):
    """Intersection over union of two boxes, in ``[0, 1]``."""
    inter = 1.0
    for a_lo, a_hi, b_lo, b_hi in zip(a.min, a.max, b.min, b.max):
        extent = min(a_hi, b_hi) - max(a_lo, b_lo)
        if extent <= 0:
            return 0.0
        inter = inter * extent
    union = a.volume + b.volume - inter
    return inter / union


def boxes_to_array(boxes):
    """Stack boxes into an ``(N, 6)`` float array."""
    if not boxes:
        return np.zeros((0, 6), dtype=np.float64)
    return np.stack([box.as_array() for box in boxes])


def iou_matrix(boxes_a, boxes_b):
    """
    Pairwise IoU between two box collections.

    Accepts lists of :class:`BoxF` or ``(N, 6)`` arrays and uses the same
    arithmetic as :func:`iou`, so entries agree with it exactly.
    """
    a = boxes_a if isinstance(boxes_a, np.ndarray) else boxes_to_array(boxes_a)
    b = boxes_b if isinstance(boxes_b, np.ndarray) else boxes_to_array(boxes_b)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)), dtype=np.float64)

    lo = np.maximum(a[:, None, :3], b[None, :, :3])
    hi = np.minimum(a[:, None, 3:], b[None, :, 3:])
    extent = np.clip(hi - lo, 0.0, None)
    inter = extent[..., 0] * extent[..., 1] * extent[..., 2]

    size_a = a[:, 3:] - a[:, :3]
    size_b = b[:, 3:] - b[:, :3]
    vol_a = size_a[:, 0] * size_a[:, 1] * size_a[:, 2]
    vol_b = size_b[:, 0] * size_b[:, 1] * size_b[:, 2]
    union = vol_a[:, None] + vol_b[None, :] - inter
    return np.where(inter > 0, inter / union, 0.0)


def scale_boxes(boxes, from_spacing, to_spacing):
    """
    Convert voxel-coordinate boxes after resampling from ``from_spacing`` to
    ``to_spacing`` (factor ``from / to`` per axis). Scores and labels stay.
    """
    from_spacing = validate_vector("spacing", from_spacing, positive=True)
    to_spacing = validate_vector("target spacing", to_spacing, positive=True)
    factors = [f / t for f, t in zip(from_spacing, to_spacing)]
    return [
        evolve(
            box,
            min=[v * k for v, k in zip(box.min, factors)],
            max=[v * k for v, k in zip(box.max, factors)],
        )
        for box in boxes
    ]
