"""Tests for the detection and segmentation losses."""

import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from training.losses import (  # noqa: E402
    DICE_EPSILON,
    LossBatch,
    bce,
    ce_seg,
    combine_losses,
    dice_seg,
    loss_components,
    total_loss,
    weighted_l1,
)
from utilities.errors import LossDomainError  # noqa: E402

STEP = 1e-5


def _numeric_gradient(func, x):
    """Central finite differences of ``func`` at ``x``."""
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        up, down = x.copy(), x.copy()
        up[index] += STEP
        down[index] -= STEP
        grad[index] = (func(up) - func(down)) / (2 * STEP)
    return grad


def _relative_error(analytic, numeric):
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
    return np.linalg.norm(analytic - numeric) / scale


def _softmax(logits):
    e = np.exp(logits - logits.max(axis=0, keepdims=True))
    return e / e.sum(axis=0, keepdims=True)


def test_bce_half():
    value, _ = bce([0.5], [1])
    assert value == pytest.approx(math.log(2), abs=1e-6)


def test_bce_confident_predictions():
    value, _ = bce([0.01, 0.99], [0, 1])
    assert value == pytest.approx(-math.log(0.99), abs=1e-9)
    assert value == pytest.approx(0.01005, abs=1e-5)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_bce_domain(p):
    with pytest.raises(LossDomainError):
        bce([0.3, p], [0, 1])


def test_bce_gradient():
    rng = np.random.default_rng(0)
    p = rng.uniform(0.05, 0.95, 100)
    t = (rng.random(100) < 0.5).astype(float)
    _, grad = bce(p, t)
    numeric = _numeric_gradient(lambda x: bce(x, t)[0], p)
    assert _relative_error(grad, numeric) < 1e-5


def test_weighted_l1_values():
    assert weighted_l1([1, 2], [1, 2], [1, 1])[0] == 0.0
    assert weighted_l1([1, 3], [0, 0], [1, 2])[0] == 3.5
    value, grad = weighted_l1([1, 3], [0, 0], [0, 0])
    assert value == 0.0
    assert not grad.any()


def test_weighted_l1_subgradient_zero_at_target():
    _, grad = weighted_l1([1.0, 2.0], [1.0, 0.0], [1.0, 1.0])
    assert grad[0] == 0.0
    assert grad[1] == 0.5


def test_weighted_l1_gradient():
    rng = np.random.default_rng(1)
    pred, target = rng.normal(size=100), rng.normal(size=100)
    weights = rng.random(100) * (rng.random(100) < 0.7)
    _, grad = weighted_l1(pred, target, weights)
    numeric = _numeric_gradient(
        lambda x: weighted_l1(x, target, weights)[0], pred
    )
    assert _relative_error(grad, numeric) < 1e-4


def test_weighted_l1_rejects_negative_weights():
    with pytest.raises(ValueError):
        weighted_l1([1.0], [0.0], [-1.0])


def test_segmentation_perfect_prediction():
    targets = np.array([[0, 1], [2, 1]])
    probs = np.stack([(targets == c).astype(float) for c in range(3)])
    assert ce_seg(probs, targets)[0] == 0.0
    assert dice_seg(probs, targets)[0] < 1e-4


def test_segmentation_uniform_two_classes():
    targets = np.array([0, 1, 1, 0, 1])
    probs = np.full((2, 5), 0.5)
    assert ce_seg(probs, targets)[0] == pytest.approx(math.log(2))


def test_ce_zero_target_probability():
    probs = np.array([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(LossDomainError):
        ce_seg(probs, np.array([1, 1]))


def test_segmentation_gradients():
    rng = np.random.default_rng(2)
    probs = _softmax(rng.normal(size=(3, 4, 5)))
    targets = rng.integers(0, 3, size=(4, 5))

    _, grad = ce_seg(probs, targets)
    numeric = _numeric_gradient(lambda x: ce_seg(x, targets)[0], probs)
    assert _relative_error(grad, numeric) < 1e-4

    _, grad = dice_seg(probs, targets)
    numeric = _numeric_gradient(lambda x: dice_seg(x, targets)[0], probs)
    assert _relative_error(grad, numeric) < 1e-4
    assert not grad[0].any()


def test_dice_is_bounded():
    rng = np.random.default_rng(3)
    for _ in range(20):
        probs = _softmax(rng.normal(size=(4, 6, 6)) * 3)
        targets = rng.integers(0, 4, size=(6, 6))
        value = dice_seg(probs, targets)[0]
        assert 0.0 <= value <= 1.0 + DICE_EPSILON


def test_combine_losses_weights_l1_twice():
    assert combine_losses(0.693, 3.5, 0.693, 0.1) == pytest.approx(8.486)
    assert combine_losses(0.0, 0.0, 0.0, 0.0) == 0.0


def _batch(l1_scale=1.0, seed=4):
    rng = np.random.default_rng(seed)
    targets = rng.integers(0, 2, size=(3, 3))
    return LossBatch(
        anchor_probs=rng.uniform(0.1, 0.9, 8),
        anchor_targets=(rng.random(8) < 0.5).astype(float),
        box_deltas_pred=rng.normal(size=(8, 6)) * l1_scale,
        box_deltas_target=np.zeros((8, 6)),
        delta_weights=np.ones((8, 6)),
        seg_probs=_softmax(rng.normal(size=(2, 3, 3))),
        seg_targets=targets,
    )


def test_total_loss_matches_components():
    batch = _batch()
    parts = loss_components(batch)
    expected = parts["bce"] + 2 * parts["l1"] + parts["ce"] + parts["dice"]
    assert total_loss(batch) == pytest.approx(expected, rel=1e-12)
    assert all(v >= 0 for v in parts.values())


def test_doubling_l1_error_only_moves_l1_term():
    single, double = _batch(1.0), _batch(2.0)
    a, b = loss_components(single), loss_components(double)
    assert b["l1"] == pytest.approx(2 * a["l1"])
    for key in ("bce", "ce", "dice"):
        assert b[key] == a[key]
    assert total_loss(double) - total_loss(single) == pytest.approx(
        2 * a["l1"]
    )


def test_batch_rejects_unnormalized_probabilities():
    with pytest.raises(ValueError, match="sum to 1"):
        LossBatch(
            anchor_probs=[0.5],
            anchor_targets=[1],
            box_deltas_pred=[0.0],
            box_deltas_target=[0.0],
            delta_weights=[1.0],
            seg_probs=np.full((2, 2), 0.6),
            seg_targets=np.array([0, 1]),
        )
