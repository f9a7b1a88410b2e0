"""
FROC evaluation.

Predictions are matched greedily in canonical order (score descending, then
lexicographic corners): a prediction is a true positive when the unmatched
ground-truth box it overlaps most reaches the IoU threshold. Because greedy
matching never revisits a decision, matching every image once gives the
matching at every score threshold as a prefix.

The FROC score is the mean sensitivity at fixed false-positive-per-image
rates, each read off as the best sensitivity whose FP rate does not exceed
the target (step function, no interpolation).
"""

import logging

import numpy as np
from attrs import field, frozen

from boxes.box import BoxF, iou_matrix
from config.pipeline_defaults import FP_POINTS
from inference.detection_set import DetectionSet
from utilities.errors import DetectionError, EvaluationError
from utilities.validators import validate_probability

logger = logging.getLogger(__name__)


@frozen
class MatchResult:
    """Matching outcome for one image, predictions in canonical order."""

    predictions: tuple = field(converter=tuple)
    is_tp: tuple = field(converter=tuple)
    gt_hit: tuple = field(converter=tuple)

    @property
    def tp(self):
        return sum(self.is_tp)

    @property
    def fp(self):
        return len(self.is_tp) - self.tp


def _boxes(preds):
    boxes = list(preds.boxes if isinstance(preds, DetectionSet) else preds)
    if any(box.score is None for box in boxes):
        raise DetectionError("evaluation needs scored predictions")
    return boxes


def match_detections(preds, gts, iou_threshold):
    """
    Label each prediction TP or FP and each ground-truth box hit or missed.

    Every ground-truth box is matched at most once. Among equally good
    ground-truth candidates the first in ``gts`` order wins.
    """
    iou_threshold = validate_probability("iou threshold", iou_threshold)
    ordered = sorted(_boxes(preds), key=BoxF.sort_key)
    gts = list(gts)
    overlaps = iou_matrix(ordered, gts)

    hit = np.zeros(len(gts), dtype=bool)
    is_tp = []
    for row in overlaps:
        candidates = np.where(hit, -1.0, row)
        best = int(np.argmax(candidates)) if len(gts) else -1
        if best >= 0 and not hit[best] and candidates[best] >= iou_threshold:
            hit[best] = True
            is_tp.append(True)
        else:
            is_tp.append(False)
    return MatchResult(ordered, is_tp, [bool(h) for h in hit])


@frozen
class FrocCurve:
    """
    FROC curve and score.

    ``points`` holds ``(threshold, fp_per_image, sensitivity)`` per distinct
    prediction score, thresholds descending. ``operating_points`` holds
    ``(fp_per_image, sensitivity)`` for each target rate.
    """

    points: tuple = field(converter=tuple)
    operating_points: tuple = field(converter=tuple)
    score: float
    iou_threshold: float
    n_images: int
    n_gt: int
    per_image: tuple = field(default=(), converter=tuple)

    @property
    def sensitivities(self):
        return [s for _, s in self.operating_points]


def _operating_sensitivity(points, rate):
    eligible = [sens for _, fp, sens in points if fp <= rate]
    return max(eligible) if eligible else 0.0


def froc_curve(per_image, iou_threshold, fp_points=FP_POINTS, image_ids=None):
    """
    Compute the FROC curve over images.

    Parameters:
        per_image: ``(predictions, gt boxes)`` pairs, one per image.
            Predictions may be a :class:`DetectionSet` or a list of boxes.
        iou_threshold (float): Match threshold.
        fp_points (tuple): Target false positives per image.
        image_ids (list): Optional names for the per-image statistics.

    Raises:
        EvaluationError: No image or no ground-truth box at all.
    """
    per_image = list(per_image)
    if not per_image:
        raise EvaluationError("FROC needs at least one image")
    n_gt = sum(len(list(gts)) for _, gts in per_image)
    if n_gt == 0:
        raise EvaluationError("FROC needs at least one ground-truth object")
    n_images = len(per_image)

    scored = []
    stats = []
    for index, (preds, gts) in enumerate(per_image):
        match = match_detections(preds, gts, iou_threshold)
        scored.extend(
            (box.score, tp) for box, tp in zip(match.predictions, match.is_tp)
        )
        if image_ids is not None:
            name = image_ids[index]
        elif isinstance(preds, DetectionSet):
            name = preds.image_id
        else:
            name = str(index)
        stats.append(
            {
                "image_id": name,
                "n_gt": len(match.gt_hit),
                "n_pred": len(match.is_tp),
                "tp": match.tp,
                "fp": match.fp,
            }
        )

    scored.sort(key=lambda item: -item[0])
    points = []
    tp = fp = 0
    for i, (score, is_tp) in enumerate(scored):
        if is_tp:
            tp += 1
        else:
            fp += 1
        last_of_score = i + 1 == len(scored) or scored[i + 1][0] != score
        if last_of_score:
            points.append((score, fp / n_images, tp / n_gt))

    operating = [
        (rate, _operating_sensitivity(points, rate)) for rate in fp_points
    ]
    score = sum(sens for _, sens in operating) / len(operating)
    logger.info(
        f"FROC at IoU {iou_threshold}: {score:.4f} over {n_images} images, "
        f"{n_gt} objects"
    )
    return FrocCurve(
        points=points,
        operating_points=operating,
        score=score,
        iou_threshold=iou_threshold,
        n_images=n_images,
        n_gt=n_gt,
        per_image=stats,
    )


def evaluate_predictions(
    gt_by_image,
    pred_by_image,
    iou_threshold,
    fp_points=FP_POINTS,
    image_ids=None,
):
    """
    FROC over ``{image_id: [BoxF]}`` mappings.

    Images default to the sorted union of both mappings, so an image with
    predictions but no ground truth still contributes its false positives.
    """
    if image_ids is None:
        image_ids = sorted(set(gt_by_image) | set(pred_by_image))
    per_image = [
        (pred_by_image.get(image_id, []), gt_by_image.get(image_id, []))
        for image_id in image_ids
    ]
    return froc_curve(per_image, iou_threshold, fp_points, image_ids=image_ids)
