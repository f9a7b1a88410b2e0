"""Immutable 3D scalar grid with voxel spacing and origin."""

import numpy as np
from attrs import evolve, field, frozen

from utilities.validators import validate_enum, validate_vector

KINDS = ("image", "label")
MAX_LABEL = np.iinfo(np.uint16).max

_validate_kind = validate_enum("kind", KINDS)


def _spacing(values):
    return validate_vector("spacing", values, positive=True)


def _origin(values):
    return validate_vector("origin", values)


def _image_payload(data):
    return np.array(data, dtype=np.float32, order="C")


def _label_payload(data):
    data = np.asarray(data)
    if data.dtype == np.bool_:
        data = data.astype(np.uint8)
    if not np.issubdtype(data.dtype, np.integer):
        if not np.all(np.isfinite(data)) or np.any(data != np.round(data)):
            raise ValueError("label volumes must contain integers only")
    if data.size and data.min() < 0:
        raise ValueError("label volumes must not contain negative values")
    if data.size and data.max() > MAX_LABEL:
        raise ValueError(f"label values above {MAX_LABEL} are not supported")
    dtype = np.uint8 if data.dtype == np.uint8 else np.uint16
    return np.array(data, dtype=dtype, order="C")


@frozen(eq=False)
class Volume:
    """A volume of kind ``image`` (float32) or ``label`` (uint8/uint16).

    ``data`` is indexed ``[z, y, x]``; ``spacing`` is mm per voxel and
    ``origin`` the world position (mm) of voxel ``(0, 0, 0)``. The payload is
    copied on construction and made read-only.
    """

    data: np.ndarray = field()
    spacing: tuple = field(default=(1.0, 1.0, 1.0), converter=_spacing)
    origin: tuple = field(default=(0.0, 0.0, 0.0), converter=_origin)
    kind: str = field(default="image")

    def __attrs_post_init__(self):
        _validate_kind(self.kind)
        if np.ndim(self.data) != 3:
            raise ValueError(
                f"volume data must be 3-dimensional, got {np.ndim(self.data)}"
            )
        if self.kind == "image":
            payload = _image_payload(self.data)
        else:
            payload = _label_payload(self.data)
        if 0 in payload.shape:
            raise ValueError("volume shape components must be positive")
        payload.setflags(write=False)
        object.__setattr__(self, "data", payload)

    @property
    def shape(self):
        return tuple(int(s) for s in self.data.shape)

    @property
    def is_label(self):
        return self.kind == "label"

    def with_data(self, data, **changes):
        """Return a copy carrying ``data`` (and any other changed fields)."""
        return evolve(self, data=data, **changes)

    def same_as(self, other):
        """Exact equality of geometry, kind, dtype and payload bytes."""
        return (
            isinstance(other, Volume)
            and self.kind == other.kind
            and self.spacing == other.spacing
            and self.origin == other.origin
            and self.data.dtype == other.data.dtype
            and self.data.shape == other.data.shape
            and self.data.tobytes() == other.data.tobytes()
        )
