"""
Merging per-patch detections into one global set.

Patch-local boxes are shifted by their patch origin, clipped to the volume
and reduced with hard NMS. :func:`detect_tiled` runs the blob detector on a
sliding-window tiling and stitches the results.
"""

import logging

import numpy as np

from config.pipeline_defaults import STITCH_IOU, TILE_OVERLAP
from inference.blob_detector import find_components
from inference.detection_set import DetectionSet
from inference.nms import nms
from training.sampler import PatchSpec, extract_patch, tile_volume
from utilities.io.worker_pool import map_in_order

logger = logging.getLogger(__name__)


def _origin(patch):
    return patch.origin if isinstance(patch, PatchSpec) else tuple(patch)


def stitch(
    per_patch, iou_threshold=STITCH_IOU, volume_shape=None, image_id=None
):
    """
    Combine ``(patch, detections)`` pairs into global detections.

    Parameters:
        per_patch: Pairs of a :class:`PatchSpec` (or a bare origin) and a
            :class:`DetectionSet` or list of boxes in patch coordinates.
        iou_threshold (float): NMS threshold across patches.
        volume_shape (tuple): Boxes are clipped to the volume and boxes
            falling entirely outside are dropped. Without it boxes are left
            unclipped, for callers that clip later.
        image_id (str): Identifier of the result; defaults to the first
            detection set's id.
    """
    moved = []
    for patch, dets in per_patch:
        if image_id is None and isinstance(dets, DetectionSet):
            image_id = dets.image_id
        for box in dets:
            box = box.translate(_origin(patch))
            if volume_shape is not None:
                box = box.clip(volume_shape)
                if box is None:
                    continue
            moved.append(box)
    kept = nms(moved, iou_threshold)
    logger.debug(
        f"Stitched {len(moved)} patch detections into {len(kept)} boxes"
    )
    return DetectionSet(image_id or "", kept)


def _interior_faces(tile, volume_shape):
    faces = []
    for o, s, n in zip(tile.origin, tile.size, volume_shape):
        faces.append((o > 0, o + s < n))
    return faces


def _continues_past_tile(data, threshold, tile, slices, mask, faces):
    """Whether a component has foreground just outside an interior face."""
    span = [
        slice(o + s.start, o + s.stop) for o, s in zip(tile.origin, slices)
    ]
    for axis, (sl, (low, high)) in enumerate(zip(slices, faces)):
        size = tile.size[axis]
        sides = (
            (low and sl.start == 0, 0, tile.origin[axis] - 1),
            (high and sl.stop == size, -1, tile.origin[axis] + size),
        )
        for at_face, face_index, outside in sides:
            if not at_face:
                continue
            face = np.take(mask, face_index, axis=axis)
            region = list(span)
            region[axis] = outside
            if (data[tuple(region)][face] >= threshold).any():
                return True
    return False


def detect_tile(vol, tile, intensity_threshold, min_voxels):
    """
    Run the blob detector on one tile.

    A component that continues across a tile face into the rest of the
    volume is cut by the tile and is dropped; it is whole in another tile.
    Components that merely end flush against a face are kept.
    """
    patch = extract_patch(vol, tile, pad_value=0.0)
    faces = _interior_faces(tile, vol.shape)
    boxes = []
    components = find_components(patch.data, intensity_threshold, min_voxels)
    for slices, mask, box in components:
        if _continues_past_tile(
            vol.data, intensity_threshold, tile, slices, mask, faces
        ):
            continue
        boxes.append(box)
    return boxes


def detect_tiled(
    vol,
    patch_size,
    overlap=TILE_OVERLAP,
    intensity_threshold=0.5,
    min_voxels=1,
    stitch_iou=STITCH_IOU,
    image_id="",
    workers=1,
):
    """Tile ``vol``, detect per tile and stitch into a :class:`DetectionSet`."""
    if vol.is_label:
        raise ValueError("tiled detection runs on image volumes")
    tiles = tile_volume(vol.shape, patch_size, overlap)
    per_tile = map_in_order(
        lambda tile: detect_tile(vol, tile, intensity_threshold, min_voxels),
        tiles,
        workers=workers,
    )
    result = stitch(
        zip(tiles, per_tile),
        stitch_iou,
        volume_shape=vol.shape,
        image_id=image_id,
    )
    logger.debug(
        f"Tiled detection on '{image_id}': {len(tiles)} tiles, "
        f"{len(result)} boxes"
    )
    return result.sorted()
