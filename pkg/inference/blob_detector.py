"""
Threshold and connected-component detector.

A deterministic stand-in for a trained network: every 6-connected component
of voxels at or above an intensity threshold becomes one detection, scored
by its mean intensity relative to twice the threshold.
"""

import logging

import numpy as np
from scipy import ndimage

from boxes.box import BoxF
from inference.detection_set import DetectionSet
from utilities.validators import validate_range

logger = logging.getLogger(__name__)

# face-connected neighbourhood
STRUCTURE = ndimage.generate_binary_structure(3, 1)


def find_components(data, intensity_threshold, min_voxels=1):
    """
    Label the foreground of ``data``.

    Returns:
        list: ``(slices, mask, BoxF with score)`` per kept component, in
        label order. ``mask`` is the component's voxels within ``slices``.
    """
    threshold = validate_range("intensity threshold", intensity_threshold, 0.0)
    if threshold <= 0:
        raise ValueError("intensity threshold must be positive")
    data = np.asarray(data)
    labels, count = ndimage.label(data >= threshold, structure=STRUCTURE)
    if count == 0:
        return []

    index = np.arange(1, count + 1)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)[1:]
    means = ndimage.mean(data, labels, index)

    components = []
    objects = ndimage.find_objects(labels)
    for label, slices, size, mean in zip(index, objects, sizes, means):
        if slices is None or size < min_voxels:
            continue
        score = min(1.0, float(mean) / (2.0 * threshold))
        box = BoxF(
            [s.start for s in slices], [s.stop for s in slices], score=score
        )
        components.append((slices, labels[slices] == label, box))
    return components


def blob_detect(vol, intensity_threshold, min_voxels=1, image_id=""):
    """
    Detect bright blobs in an image volume.

    Parameters:
        vol (Volume): Image volume.
        intensity_threshold (float): Foreground threshold, > 0.
        min_voxels (int): Smallest component kept.
        image_id (str): Identifier carried by the result.

    Returns:
        DetectionSet: One tight box per component, in canonical order.
    """
    if vol.is_label:
        raise ValueError("blob detection runs on image volumes")
    components = find_components(vol.data, intensity_threshold, min_voxels)
    logger.debug(f"Found {len(components)} blobs in '{image_id}'")
    return DetectionSet(image_id, [box for *_, box in components]).sorted()
