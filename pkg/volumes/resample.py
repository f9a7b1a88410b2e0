"""
Spacing-tolerant resampling.

Scans whose spacing is within a relative tolerance of the target spacing are
left untouched; all others are resampled. Image volumes are interpolated
trilinearly, label volumes by nearest neighbour, and samples that fall outside
the input grid clamp to the nearest edge voxel.
"""

import logging

import numpy as np
from scipy import ndimage

from utilities.core.shared_utils import round_half_away
from utilities.validators import validate_range, validate_vector

logger = logging.getLogger(__name__)


def needs_resampling(spacing, target, tolerance=0.05):
    """
    Return ``True`` if any axis deviates from ``target`` by more than
    ``tolerance`` (relative to the target spacing).

    Example:
        >>> needs_resampling((1.40, 1.43, 1.60), (1.40, 1.43, 1.43))
        True
    """
    spacing = validate_vector("spacing", spacing, positive=True)
    target = validate_vector("target spacing", target, positive=True)
    tolerance = validate_range("tolerance", tolerance, low=0.0)
    return any(abs(s - t) / t > tolerance for s, t in zip(spacing, target))


def resampled_shape(shape, spacing, target_spacing):
    """Output shape: ``round(shape * spacing / target)`` per axis, min 1."""
    return tuple(
        max(1, round_half_away(n * s / t))
        for n, s, t in zip(shape, spacing, target_spacing)
    )


def zoom_to_shape(array, shape, order=1, scale=None, mode="nearest", cval=0.0):
    """
    Resample ``array`` onto a grid of ``shape`` with aligned voxel centres.

    Output voxel ``o`` samples input coordinate ``(o + 0.5) * r - 0.5`` with
    ``r = scale`` if given, else ``in_shape / out_shape``. The map is a
    diagonal matrix for :func:`scipy.ndimage.affine_transform`.
    """
    array = np.asarray(array)
    shape = tuple(int(s) for s in shape)
    if scale is None:
        scale = [n / m for n, m in zip(array.shape, shape)]
    scale = np.asarray(scale, dtype=np.float64)
    offset = 0.5 * scale - 0.5

    if order == 0:
        output = array.dtype
    else:
        output = np.float32
    return ndimage.affine_transform(
        array,
        np.diag(scale),
        offset=offset,
        output_shape=shape,
        output=output,
        order=order,
        mode=mode,
        cval=cval,
        prefilter=False,
    )


def resample(vol, target_spacing):
    """
    Resample ``vol`` to ``target_spacing``.

    The output shape is ``round(shape * spacing / target)`` (ties away from
    zero, at least 1). Images use trilinear interpolation, labels nearest
    neighbour, so label outputs only contain input label values.
    """
    target_spacing = validate_vector(
        "target spacing", target_spacing, positive=True
    )
    shape = resampled_shape(vol.shape, vol.spacing, target_spacing)
    ratio = [t / s for s, t in zip(vol.spacing, target_spacing)]
    order = 0 if vol.is_label else 1

    data = zoom_to_shape(vol.data, shape, order=order, scale=ratio)
    origin = tuple(
        o + 0.5 * t - 0.5 * s
        for o, s, t in zip(vol.origin, vol.spacing, target_spacing)
    )
    logger.debug(
        f"Resampled {vol.kind} {vol.shape} @ {vol.spacing} -> "
        f"{shape} @ {target_spacing}"
    )
    return vol.with_data(data, spacing=target_spacing, origin=origin)


def preprocess_volume(vol, target_spacing, tolerance=0.05):
    """
    Resample only when the spacing is outside the tolerance.

    Returns:
        tuple: ``(volume, resampled)`` where ``resampled`` tells whether the
        resampling step ran.
    """
    if not needs_resampling(vol.spacing, target_spacing, tolerance):
        return vol, False
    return resample(vol, target_spacing), True
