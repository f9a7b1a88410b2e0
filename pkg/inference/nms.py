"""Greedy hard non-maximum suppression."""

import logging

from boxes.box import BoxF, iou
from utilities.errors import DetectionError
from utilities.validators import validate_probability

logger = logging.getLogger(__name__)


def nms(dets, iou_threshold=0.5):
    """
    Keep boxes in descending score order, dropping any box whose IoU with an
    already kept box exceeds ``iou_threshold``.

    Ties in score are broken by the lexicographic box corners, so the result
    does not depend on input order.

    Raises:
        DetectionError: A box has no score.
    """
    iou_threshold = validate_probability("iou threshold", iou_threshold)
    dets = list(dets)
    if any(box.score is None for box in dets):
        raise DetectionError("non-maximum suppression needs scored boxes")

    kept = []
    for box in sorted(dets, key=BoxF.sort_key):
        if all(iou(box, other) <= iou_threshold for other in kept):
            kept.append(box)
    if len(kept) != len(dets):
        logger.debug(f"NMS kept {len(kept)} of {len(dets)} boxes")
    return kept
