"""
Weighted box fusion of detection sets from several models.

Boxes of all models are pooled and visited in canonical order. A box joins
the cluster whose fused box it overlaps most, provided that IoU reaches the
threshold; otherwise it opens a new cluster. A cluster's fused box is the
score-weighted mean of its members' corners, and its score is the mean member
score scaled by the fraction of models that contributed, capped at 1.
"""

import logging

import numpy as np

from boxes.box import BoxF, iou
from config.pipeline_defaults import ENSEMBLE_IOU
from inference.detection_set import DetectionSet
from utilities.errors import DetectionError
from utilities.validators import validate_probability

logger = logging.getLogger(__name__)


class _Cluster:
    def __init__(self, box, model):
        self.members = [(box, model)]
        self.fused = box

    def add(self, box, model):
        self.members.append((box, model))
        self.fused = self._fuse()

    def _fuse(self):
        corners = np.stack([box.as_array() for box, _ in self.members])
        scores = np.array([box.score for box, _ in self.members])
        total = scores.sum()
        if total > 0:
            weights = scores / total
        else:
            weights = np.full(len(scores), 1.0 / len(scores))
        return BoxF.from_array(weights @ corners)

    def result(self, n_models):
        scores = [box.score for box, _ in self.members]
        models = {model for _, model in self.members}
        score = float(np.mean(scores)) * len(models) / n_models
        return self._fuse().with_score(min(1.0, score))


def fuse_detection_sets(sets, iou_threshold=ENSEMBLE_IOU):
    """
    Fuse detection sets of the same image from ``len(sets)`` models.

    Raises:
        DetectionError: The sets describe different images.
    """
    sets = list(sets)
    if not sets:
        raise DetectionError("nothing to fuse")
    iou_threshold = validate_probability("iou threshold", iou_threshold)
    image_ids = {s.image_id for s in sets}
    if len(image_ids) != 1:
        raise DetectionError(
            f"cannot fuse detections of different images: {sorted(image_ids)}"
        )

    pooled = [(box, model) for model, s in enumerate(sets) for box in s.boxes]
    pooled.sort(key=lambda item: (item[0].sort_key(), item[1]))

    clusters = []
    for box, model in pooled:
        best, best_iou = None, iou_threshold
        for cluster in clusters:
            overlap = iou(box, cluster.fused)
            if overlap >= best_iou and (best is None or overlap > best_iou):
                best, best_iou = cluster, overlap
        if best is None:
            clusters.append(_Cluster(box, model))
        else:
            best.add(box, model)

    fused = [cluster.result(len(sets)) for cluster in clusters]
    logger.debug(
        f"Fused {len(pooled)} boxes from {len(sets)} models into "
        f"{len(fused)} clusters"
    )
    return DetectionSet(sets[0].image_id, fused).sorted()


def ensemble_fuse(a, b, iou_threshold=ENSEMBLE_IOU):
    """Fuse the detections of two models for one image."""
    return fuse_detection_sets([a, b], iou_threshold)
