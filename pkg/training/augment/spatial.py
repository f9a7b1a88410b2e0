"""
Spatial augmentation applied jointly to image, mask and boxes.

All spatial transforms are composed into one linear map in centred voxel
coordinates, applied in the order scaling, rotation, transposition,
rotation by 90 degrees, mirroring. Right-angle compositions are signed axis
permutations and run as exact array transposes and flips; anything else is a
single :func:`scipy.ndimage.affine_transform` pass. Boxes are never moved
directly: they are re-derived from the transformed mask.
"""

import itertools
import logging
import math

import numpy as np
from scipy import ndimage

from boxes.box import BoxF
from boxes.pseudo_mask import relabel_instances
from training.augment.sample import Sample

logger = logging.getLogger(__name__)


def _scale_matrix(scale):
    return np.eye(3) * (1.0 if scale is None else scale)


def _axis_rotation(axis, degrees):
    a, b = [i for i in range(3) if i != axis]
    theta = math.radians(degrees)
    m = np.eye(3)
    m[a, a] = math.cos(theta)
    m[a, b] = -math.sin(theta)
    m[b, a] = math.sin(theta)
    m[b, b] = math.cos(theta)
    return m


def _rotation_matrix(rotation):
    if rotation is None:
        return np.eye(3)
    m = np.eye(3)
    for axis, degrees in enumerate(rotation):
        if degrees:
            m = _axis_rotation(axis, degrees) @ m
    return m


def _transpose_matrix(perm):
    m = np.zeros((3, 3))
    for i, j in enumerate(perm or (0, 1, 2)):
        m[i, j] = 1.0
    return m


def _rotation90_matrix(rotation90):
    if rotation90 is None:
        return np.eye(3)
    k, (a, b) = rotation90
    step = np.eye(3)
    step[a, a], step[a, b] = 0.0, -1.0
    step[b, a], step[b, b] = 1.0, 0.0
    return np.linalg.matrix_power(step, k)


def _mirror_matrix(axes):
    m = np.eye(3)
    for axis in axes:
        m[axis, axis] = -1.0
    return m


def _permutation_part(params):
    return _rotation90_matrix(params.rotation90) @ _transpose_matrix(
        params.transpose
    )


def spatial_matrix(params):
    """Forward linear map of centred coordinates, input to output."""
    return (
        _mirror_matrix(params.mirror)
        @ _permutation_part(params)
        @ _rotation_matrix(params.rotation)
        @ _scale_matrix(params.scale)
    )


def output_shape(shape, params):
    """Input ``shape`` with its axes permuted by transpose and rotation90."""
    perm = np.abs(_permutation_part(params)).argmax(axis=1)
    return tuple(int(shape[j]) for j in perm)


def _signed_permutation(matrix):
    """Return ``(perm, flips)`` if ``matrix`` is a signed permutation."""
    rounded = np.rint(matrix)
    if not np.allclose(matrix, rounded, atol=1e-12):
        return None
    if not np.array_equal(np.abs(rounded).sum(axis=0), np.ones(3)):
        return None
    if not np.array_equal(np.abs(rounded).sum(axis=1), np.ones(3)):
        return None
    perm = tuple(int(j) for j in np.abs(rounded).argmax(axis=1))
    flips = tuple(i for i in range(3) if rounded[i, perm[i]] < 0)
    return perm, flips


def _permute_exact(data, perm, flips):
    out = np.transpose(data, perm)
    if flips:
        out = np.flip(out, axis=flips)
    return np.ascontiguousarray(out)


def _resample(data, matrix, shape_out, order, mode, output):
    inverse = np.linalg.inv(matrix)
    shape_in = np.asarray(data.shape, dtype=np.float64)
    centre_out = np.asarray(shape_out, dtype=np.float64) / 2.0
    offset = inverse @ (0.5 - centre_out) + shape_in / 2.0 - 0.5
    return ndimage.affine_transform(
        data,
        inverse,
        offset=offset,
        output_shape=shape_out,
        output=output,
        order=order,
        mode=mode,
        cval=0.0,
        prefilter=False,
    )


def transform_box(box, params, shape):
    """
    Map ``box`` analytically through the spatial transform.

    Returns the bounding box of the eight transformed corners. For right-angle
    compositions this is the exact image of the box; for continuous rotations
    it is the naive box that over-covers the rotated object.
    """
    matrix = spatial_matrix(params)
    centre_in = np.asarray(shape, dtype=np.float64) / 2.0
    centre_out = np.asarray(output_shape(shape, params), dtype=np.float64) / 2.0
    corners = np.array(list(itertools.product(*zip(box.min, box.max))))
    moved = (corners - centre_in) @ matrix.T + centre_out
    return BoxF(moved.min(axis=0), moved.max(axis=0), score=box.score)


def apply_spatial(sample, params):
    """
    Apply the spatial part of ``params`` to ``sample``.

    The image is interpolated trilinearly with edge clamping and the mask by
    nearest neighbour with zero padding. Surviving instances are renumbered
    consecutively and their boxes re-derived; vanished instances drop out.
    """
    if params.is_spatial_identity:
        return sample

    matrix = spatial_matrix(params)
    shape_out = output_shape(sample.image.shape, params)
    exact = _signed_permutation(matrix)

    if exact is not None:
        perm, flips = exact
        image = _permute_exact(sample.image.data, perm, flips)
        mask = _permute_exact(sample.mask.data, perm, flips)
    else:
        image = _resample(
            sample.image.data, matrix, shape_out, 1, "nearest", np.float32
        )
        mask = _resample(
            sample.mask.data,
            matrix,
            shape_out,
            0,
            "constant",
            sample.mask.data.dtype,
        )

    perm = np.abs(_permutation_part(params)).argmax(axis=1)
    spacing = tuple(sample.image.spacing[j] for j in perm)
    mask, boxes = relabel_instances(mask)

    if len(boxes) != len(sample.boxes):
        logger.debug(
            f"{len(sample.boxes) - len(boxes)} instance(s) left the patch"
        )
    return Sample(
        sample.image.with_data(image, spacing=spacing),
        sample.mask.with_data(mask, spacing=spacing),
        boxes,
    )
