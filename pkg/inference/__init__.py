"""
Inference package.

Detection sets, the threshold blob detector, non-maximum suppression,
cross-patch stitching and ensemble fusion.
"""

from inference.blob_detector import blob_detect
from inference.detection_set import DetectionSet
from inference.ensemble import ensemble_fuse, fuse_detection_sets
from inference.nms import nms
from inference.stitching import detect_tiled, stitch

__all__ = [
    "DetectionSet",
    "blob_detect",
    "nms",
    "stitch",
    "detect_tiled",
    "ensemble_fuse",
    "fuse_detection_sets",
]
