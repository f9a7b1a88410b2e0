"""
Ellipsoid pseudo masks and mask-to-box derivation.

A box annotation is turned into a label volume by drawing the ellipsoid
inscribed in the box: voxel ``v`` (centre ``v + 0.5``) belongs to instance
``k`` iff ``sum(((v + 0.5 - c) / r) ** 2) <= 1`` with ``c`` the box centre and
``r`` its half extent. Later boxes overwrite earlier ones where they overlap.
"""

import logging
import math

import numpy as np
from scipy import ndimage

from boxes.box import BoxF
from utilities.errors import GeometryError, InstanceNotFoundError
from utilities.validators import validate_vector
from volumes.volume import Volume

logger = logging.getLogger(__name__)


def _voxel_range(lo, hi, n):
    """Voxel indices whose centres may fall inside ``[lo, hi)``."""
    start = max(0, int(math.floor(lo - 0.5)))
    stop = min(n, int(math.ceil(hi + 0.5)))
    return start, stop


def ellipsoid_region(box, shape):
    """
    Rasterise the ellipsoid inscribed in ``box``.

    Returns:
        tuple: ``(slices, inside)`` where ``inside`` is a boolean array for the
        sub-grid addressed by ``slices``; ``(None, None)`` when the sub-grid is
        empty.
    """
    ranges = [
        _voxel_range(lo, hi, n) for lo, hi, n in zip(box.min, box.max, shape)
    ]
    if any(start >= stop for start, stop in ranges):
        return None, None

    axes = []
    for (start, stop), c, r in zip(ranges, box.center, box.size):
        centres = np.arange(start, stop, dtype=np.float64) + 0.5
        axes.append(((centres - c) / (r / 2.0)) ** 2)
    dist = (
        axes[0][:, None, None] + axes[1][None, :, None] + axes[2][None, None, :]
    )
    slices = tuple(slice(start, stop) for start, stop in ranges)
    return slices, dist <= 1.0


def ellipsoid_mask(
    boxes, shape, spacing=(1.0, 1.0, 1.0), origin=(0.0, 0.0, 0.0)
):
    """
    Build a label volume with one ellipsoid instance per box.

    Parameters:
        boxes (list of BoxF): Instance ``k`` is drawn from ``boxes[k - 1]``.
        shape (tuple): Output shape (z, y, x).
        spacing, origin: Geometry copied onto the output volume.

    Raises:
        GeometryError: A box does not intersect the volume.
    """
    shape = validate_vector("shape", shape, positive=True, integer=True)
    mask = np.zeros(shape, dtype=np.uint16)
    for k, box in enumerate(boxes, start=1):
        if not box.intersects_shape(shape):
            raise GeometryError(f"box {k} does not intersect volume {shape}")
        slices, inside = ellipsoid_region(box, shape)
        if slices is None:
            continue
        mask[slices][inside] = k
    return Volume(mask, spacing=spacing, origin=origin, kind="label")


def ellipsoid_touches_faces(box):
    """
    Tell whether the ellipsoid of an integer box reaches all six box faces.

    Along an axis of extent ``E`` the outermost voxel centre sits at scaled
    distance ``1 - 1/E``; the closest centres on the other axes add ``0`` (odd
    extent) or ``1/E'`` (even extent). The mask-to-box round trip is exact
    iff the face voxels fall inside on every axis.
    """
    extents = [int(round(e)) for e in box.size]
    for axis, extent in enumerate(extents):
        total = (1.0 - 1.0 / extent) ** 2
        for other, e in enumerate(extents):
            if other != axis and e % 2 == 0:
                total += (1.0 / e) ** 2
        if total > 1.0:
            return False
    return True


def _box_from_slices(slices, label=None):
    return BoxF(
        [s.start for s in slices], [s.stop for s in slices], label=label
    )


def box_from_mask(mask, instance):
    """
    Tight half-open box around all voxels of ``instance``.

    Raises:
        InstanceNotFoundError: No voxel carries ``instance``.
    """
    data = mask.data if isinstance(mask, Volume) else np.asarray(mask)
    coords = np.nonzero(data == instance)
    if instance <= 0 or coords[0].size == 0:
        raise InstanceNotFoundError(f"instance {instance} not present in mask")
    lo = [int(c.min()) for c in coords]
    hi = [int(c.max()) + 1 for c in coords]
    return BoxF(lo, hi)


def boxes_from_mask(mask):
    """Return ``{instance: BoxF}`` for every instance present in ``mask``."""
    data = mask.data if isinstance(mask, Volume) else np.asarray(mask)
    found = {}
    for index, slices in enumerate(ndimage.find_objects(data), start=1):
        if slices is not None:
            found[index] = _box_from_slices(slices)
    return found


def relabel_instances(data):
    """
    Renumber the instances of a label array consecutively from 1.

    Returns:
        tuple: ``(relabelled uint16 array, [BoxF, ...])`` with box ``k - 1``
        bounding the new instance ``k``.
    """
    data = np.asarray(data)
    present = [k for k in np.unique(data) if k != 0]
    lookup = np.zeros(int(data.max()) + 1 if data.size else 1, dtype=np.uint16)
    for new, old in enumerate(present, start=1):
        lookup[int(old)] = new
    relabelled = lookup[data]
    found = boxes_from_mask(relabelled)
    return relabelled, [found[k] for k in sorted(found)]
