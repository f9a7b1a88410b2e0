"""
Training patch placement, patch extraction and sliding-window tiling.

Placement follows the 70% offset rule. On every axis where the object extent
``S`` does not exceed ``0.7 * P`` of the patch extent, the patch fully contains
the object and is shifted by a uniform offset of at most ``0.7 * (P - S)``.
On the remaining axes the patch is centred on a uniformly drawn point inside
the object.
"""

import itertools
import logging
import math

import numpy as np
from attrs import field, frozen

from config.pipeline_defaults import OFFSET_FRACTION
from utilities.errors import GeometryError
from utilities.validators import validate_range, validate_vector

logger = logging.getLogger(__name__)

CONTAIN = "contain"
CENTER = "center"


@frozen
class PatchSpec:
    """Integer patch placement; ``origin`` may lie outside the volume."""

    origin: tuple = field(
        converter=lambda v: validate_vector("origin", v, integer=True)
    )
    size: tuple = field(
        converter=lambda v: validate_vector(
            "patch size", v, positive=True, integer=True
        )
    )

    @property
    def stop(self):
        return tuple(o + s for o, s in zip(self.origin, self.size))

    @property
    def center(self):
        return tuple(o + s / 2.0 for o, s in zip(self.origin, self.size))

    def contains_box(self, box):
        return all(
            o <= lo and hi <= e
            for o, e, lo, hi in zip(self.origin, self.stop, box.min, box.max)
        )

    def to_dict(self):
        return {"origin": list(self.origin), "size": list(self.size)}


def placement_branches(target, patch_size, fraction=OFFSET_FRACTION):
    """
    Per-axis placement rule for ``target`` in a patch of ``patch_size``.

    The comparison is exact: an extent of exactly ``fraction * P`` still takes
    the containment branch.
    """
    patch_size = validate_vector("patch size", patch_size, positive=True)
    return tuple(
        CONTAIN if s <= fraction * p else CENTER
        for s, p in zip(target.size, patch_size)
    )


def _contain_origin(lo, hi, size, rng, fraction):
    extent = hi - lo
    base = (lo + hi) / 2.0 - size / 2.0
    bound = fraction * (size - extent)
    origin = base + rng.uniform(-bound, bound)
    origin = min(max(origin, hi - size), lo)

    low, high = math.ceil(hi - size), math.floor(lo)
    if low > high:
        # non-integer corners with no integer placement that contains them
        return int(math.floor(base))
    return int(min(max(math.floor(origin), low), high))


def _center_origin(lo, hi, size, rng):
    point = rng.uniform(lo, hi)
    origin = math.floor(point - size / 2.0)
    low, high = math.ceil(lo - size / 2.0), math.floor(hi - size / 2.0)
    if low <= high:
        origin = min(max(origin, low), high)
    return int(origin)


def sample_training_patch(
    volume_shape, target, patch_size, rng_seed=None, fraction=OFFSET_FRACTION
):
    """
    Place a training patch around ``target``.

    Parameters:
        volume_shape (tuple): Shape of the volume the patch is cut from.
        target (BoxF): The object the patch is built around.
        patch_size (tuple): Patch extent per axis.
        rng_seed (int or numpy.random.Generator): Source of randomness; equal
            seeds give equal placements.

    Returns:
        PatchSpec: Integer origin and the requested size.

    Raises:
        GeometryError: ``target`` does not intersect the volume.
    """
    volume_shape = validate_vector(
        "volume shape", volume_shape, positive=True, integer=True
    )
    patch_size = validate_vector(
        "patch size", patch_size, positive=True, integer=True
    )
    if not target.intersects_shape(volume_shape):
        raise GeometryError(
            f"target {target.min}-{target.max} lies outside volume "
            f"{volume_shape}"
        )

    rng = np.random.default_rng(rng_seed)
    branches = placement_branches(target, patch_size, fraction)
    origin = []
    axes = zip(target.min, target.max, patch_size, branches)
    for lo, hi, size, branch in axes:
        if branch == CONTAIN:
            origin.append(_contain_origin(lo, hi, size, rng, fraction))
        else:
            origin.append(_center_origin(lo, hi, size, rng))

    logger.debug(f"Placed patch at {origin} using branches {branches}")
    return PatchSpec(origin, patch_size)


def _overlap(spec, shape):
    """Source and destination slices of the in-bounds part of ``spec``."""
    src, dst = [], []
    for o, s, n in zip(spec.origin, spec.size, shape):
        lo, hi = max(o, 0), min(o + s, n)
        if lo >= hi:
            return None, None
        src.append(slice(lo, hi))
        dst.append(slice(lo - o, hi - o))
    return tuple(src), tuple(dst)


def extract_patch(vol, spec, pad_value=0.0):
    """
    Cut ``spec`` out of ``vol``, padding out-of-bounds voxels.

    Label volumes are always padded with 0. The patch origin is moved to the
    world position of the patch's first voxel.
    """
    if vol.is_label:
        pad_value = 0
    data = np.full(spec.size, pad_value, dtype=vol.data.dtype)
    src, dst = _overlap(spec, vol.shape)
    if src is not None:
        data[dst] = vol.data[src]
    origin = [
        o + i * s for o, i, s in zip(vol.origin, spec.origin, vol.spacing)
    ]
    return vol.with_data(data, origin=origin)


def embed_patch(vol, patch, spec):
    """Write the in-bounds part of ``patch`` back into a copy of ``vol``."""
    if patch.shape != spec.size:
        raise GeometryError(
            f"patch shape {patch.shape} does not match spec size {spec.size}"
        )
    data = np.array(vol.data)
    src, dst = _overlap(spec, vol.shape)
    if src is not None:
        data[src] = patch.data[dst]
    return vol.with_data(data)


def _axis_origins(n, size, stride):
    if size >= n:
        return [0]
    origins = []
    o = 0
    while True:
        if o + size >= n:
            origins.append(n - size)
            break
        origins.append(o)
        o += stride
    return origins


def tile_volume(volume_shape, patch_size, overlap_fraction=0.5):
    """
    Sliding-window tiles covering the whole volume.

    Tiles start at multiples of ``max(1, floor(P * (1 - overlap)))``; the last
    tile on each axis is shifted back to end on the volume boundary. Patches
    larger than the volume yield a single tile at the origin.

    Example:
        >>> [t.origin[0] for t in tile_volume((256, 192, 192), (192,) * 3)]
        [0, 64]
    """
    volume_shape = validate_vector(
        "volume shape", volume_shape, positive=True, integer=True
    )
    patch_size = validate_vector(
        "patch size", patch_size, positive=True, integer=True
    )
    overlap = validate_range(
        "overlap fraction", overlap_fraction, 0.0, 1.0, high_inclusive=False
    )
    per_axis = []
    for n, size in zip(volume_shape, patch_size):
        stride = max(1, int(math.floor(size * (1.0 - overlap))))
        per_axis.append(_axis_origins(n, size, stride))

    tiles = [
        PatchSpec(origin, patch_size)
        for origin in itertools.product(*per_axis)
    ]
    logger.debug(f"Tiled volume {volume_shape} into {len(tiles)} patches")
    return tiles
