"""
Boxes package.

Bounding-box geometry, ellipsoid pseudo masks, mask-to-box derivation, IoU
and the annotation/prediction CSV formats.
"""

from boxes.box import BoxF, iou, iou_matrix, scale_boxes
from boxes.pseudo_mask import (
    box_from_mask,
    boxes_from_mask,
    ellipsoid_mask,
    ellipsoid_touches_faces,
)

__all__ = [
    "BoxF",
    "iou",
    "iou_matrix",
    "scale_boxes",
    "ellipsoid_mask",
    "box_from_mask",
    "boxes_from_mask",
    "ellipsoid_touches_faces",
]
