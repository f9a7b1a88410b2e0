"""
Detection and segmentation losses with analytic gradients.

Each loss returns ``(value, gradient)`` where the gradient is taken with
respect to the predicted input and has its shape. The total training loss is

    total = bce + 2 * weighted_l1 + ce_seg + dice_seg

Segmentation probabilities are laid out ``(classes, *spatial)`` and targets
``(*spatial)`` as class indices. Reductions go through ``numpy.sum`` so the
summation order is fixed.
"""

import numpy as np
from attrs import field, frozen

from utilities.errors import LossDomainError

DICE_EPSILON = 1e-5
NORMALIZATION_TOLERANCE = 1e-6

# bce, weighted l1, segmentation ce, segmentation dice
LOSS_WEIGHTS = (1.0, 2.0, 1.0, 1.0)


def _as_float(values):
    return np.asarray(values, dtype=np.float64)


def _check_same_shape(*arrays):
    shapes = {a.shape for a in arrays}
    if len(shapes) != 1:
        raise ValueError(f"loss inputs differ in shape: {sorted(shapes)}")


def _check_binary(targets):
    if not np.all((targets == 0) | (targets == 1)):
        raise ValueError("binary targets must be 0 or 1")


def bce(probs, targets):
    """
    Mean binary cross entropy and its gradient.

    Raises:
        LossDomainError: A probability is exactly 0 or 1 (or outside).
    """
    p = _as_float(probs)
    t = _as_float(targets)
    _check_same_shape(p, t)
    _check_binary(t)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise LossDomainError(
            "binary cross entropy needs probabilities in (0, 1)"
        )
    n = p.size
    if n == 0:
        return 0.0, np.zeros_like(p)

    losses = -(t * np.log(p) + (1.0 - t) * np.log1p(-p))
    grad = (p - t) / (p * (1.0 - p)) / n
    return float(np.sum(losses) / n), grad


def weighted_l1(pred, target, weights):
    """
    Weighted L1 normalised by the number of positively weighted entries.

    The subgradient at ``pred == target`` is 0; all-zero weights give 0.
    """
    p = _as_float(pred)
    t = _as_float(target)
    w = _as_float(weights)
    _check_same_shape(p, t, w)
    if np.any(w < 0):
        raise ValueError("L1 weights must be non-negative")

    denom = max(1.0, float(np.count_nonzero(w > 0)))
    diff = p - t
    value = float(np.sum(w * np.abs(diff)) / denom)
    return value, w * np.sign(diff) / denom


def _check_segmentation(probs, targets):
    if probs.ndim < 2 or probs.shape[1:] != targets.shape:
        raise ValueError(
            f"segmentation probs {probs.shape} do not match targets "
            f"{targets.shape} with a leading class axis"
        )
    if np.any(targets != np.round(targets)):
        raise ValueError("segmentation targets must be class indices")
    if targets.size and (targets.min() < 0 or targets.max() >= probs.shape[0]):
        raise ValueError(
            f"segmentation targets must lie in [0, {probs.shape[0]})"
        )


def ce_seg(seg_probs, seg_targets):
    """
    Voxel-mean cross entropy of the target class probability.

    Raises:
        LossDomainError: A target class has probability 0.
    """
    probs = _as_float(seg_probs)
    targets = np.asarray(seg_targets)
    _check_segmentation(probs, targets)
    index = targets.astype(np.intp)[None, ...]
    picked = np.take_along_axis(probs, index, axis=0)[0]
    if np.any(picked <= 0.0):
        raise LossDomainError("target class probability is 0")

    n = picked.size
    grad = np.zeros_like(probs)
    np.put_along_axis(grad, index, (-1.0 / (picked * n))[None, ...], axis=0)
    return float(np.sum(-np.log(picked)) / n), grad


def dice_seg(seg_probs, seg_targets, epsilon=DICE_EPSILON):
    """
    Soft Dice loss averaged over the foreground classes ``1 .. C-1``.

    ``1 - mean_c (2 * sum(p_c * t_c) + eps) / (sum(p_c) + sum(t_c) + eps)``;
    the background class gets a zero gradient.
    """
    probs = _as_float(seg_probs)
    targets = np.asarray(seg_targets)
    _check_segmentation(probs, targets)
    classes = probs.shape[0]
    if classes < 2:
        raise ValueError("dice loss needs at least one foreground class")

    grad = np.zeros_like(probs)
    total = 0.0
    k = classes - 1
    for c in range(1, classes):
        p = probs[c]
        t = (targets == c).astype(np.float64)
        inter = float(np.sum(p * t))
        denom = float(np.sum(p)) + float(np.sum(t)) + epsilon
        numer = 2.0 * inter + epsilon
        total += numer / denom
        grad[c] = -(2.0 * t * denom - numer) / (denom * denom) / k
    return 1.0 - total / k, grad


def _probabilities(values):
    return np.asarray(values, dtype=np.float64)


@frozen(eq=False)
class LossBatch:
    """Already matched anchor targets plus segmentation outputs."""

    anchor_probs: np.ndarray = field(converter=_probabilities)
    anchor_targets: np.ndarray = field(converter=_probabilities)
    box_deltas_pred: np.ndarray = field(converter=_probabilities)
    box_deltas_target: np.ndarray = field(converter=_probabilities)
    delta_weights: np.ndarray = field(converter=_probabilities)
    seg_probs: np.ndarray = field(converter=_probabilities)
    seg_targets: np.ndarray = field(converter=np.asarray)

    def __attrs_post_init__(self):
        if np.any(self.anchor_probs <= 0) or np.any(self.anchor_probs >= 1):
            raise LossDomainError("anchor probabilities must lie in (0, 1)")
        _check_binary(self.anchor_targets)
        if np.any(self.delta_weights < 0):
            raise ValueError("delta weights must be non-negative")
        if np.any(self.seg_probs < 0):
            raise ValueError("segmentation probabilities must be non-negative")
        _check_segmentation(self.seg_probs, self.seg_targets)
        sums = np.sum(self.seg_probs, axis=0)
        if np.any(np.abs(sums - 1.0) > NORMALIZATION_TOLERANCE):
            raise ValueError(
                "segmentation probabilities must sum to 1 over classes"
            )


def loss_components(batch):
    """The four loss values keyed ``bce``, ``l1``, ``ce`` and ``dice``."""
    return {
        "bce": bce(batch.anchor_probs, batch.anchor_targets)[0],
        "l1": weighted_l1(
            batch.box_deltas_pred, batch.box_deltas_target, batch.delta_weights
        )[0],
        "ce": ce_seg(batch.seg_probs, batch.seg_targets)[0],
        "dice": dice_seg(batch.seg_probs, batch.seg_targets)[0],
    }


def combine_losses(bce_value, l1_value, ce_value, dice_value):
    """Weighted sum ``bce + 2 * l1 + ce + dice``."""
    parts = (bce_value, l1_value, ce_value, dice_value)
    return float(sum(w * v for w, v in zip(LOSS_WEIGHTS, parts)))


def total_loss(batch):
    c = loss_components(batch)
    return combine_losses(c["bce"], c["l1"], c["ce"], c["dice"])
