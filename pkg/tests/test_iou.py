"""Tests for box geometry and IoU."""

import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from boxes.box import BoxF, iou, iou_matrix, scale_boxes  # noqa: E402


def _box(*values, score=None):
    return BoxF.from_array(values, score=score)


def _random_box(rng):
    lo = rng.random(3) * 6
    return BoxF(lo, lo + rng.random(3) * 4 + 0.5)


def test_identical_boxes():
    box = _box(1, 2, 3, 4, 5, 6)
    assert iou(box, box) == 1.0


def test_disjoint_boxes():
    assert iou(_box(0, 0, 0, 1, 1, 1), _box(2, 2, 2, 3, 3, 3)) == 0.0
    assert iou(_box(0, 0, 0, 1, 1, 1), _box(1, 0, 0, 2, 1, 1)) == 0.0


def test_half_shifted_boxes():
    """500 / 1500 for a shift of half the extent."""
    a = _box(0, 0, 0, 10, 10, 10)
    b = _box(5, 0, 0, 15, 10, 10)
    assert iou(a, b) == pytest.approx(1.0 / 3.0)


def test_iou_matches_voxel_counting():
    """500 random integer pairs agree with counted voxel overlaps."""
    rng = np.random.default_rng(7)
    for _ in range(500):
        boxes = []
        for _ in range(2):
            lo = rng.integers(0, 12, size=3)
            hi = lo + rng.integers(1, 8, size=3)
            boxes.append(BoxF(lo, hi))
        grids = []
        for box in boxes:
            grid = np.zeros((20, 20, 20), dtype=bool)
            region = zip(box.min, box.max)
            grid[tuple(slice(int(a), int(b)) for a, b in region)] = True
            grids.append(grid)
        inter = np.logical_and(*grids).sum()
        union = np.logical_or(*grids).sum()
        assert iou(*boxes) == pytest.approx(inter / union)


def test_iou_symmetry_and_invariance():
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b = (
            BoxF(lo, lo + rng.random(3) * 5 + 0.1)
            for lo in (rng.random(3) * 5, rng.random(3) * 5)
        )
        value = iou(a, b)
        assert 0.0 <= value <= 1.0
        assert iou(b, a) == pytest.approx(value)
        shift = rng.random(3) * 10
        assert iou(a.translate(shift), b.translate(shift)) == pytest.approx(
            value
        )
        perm = [2, 0, 1]
        pa = BoxF([a.min[i] for i in perm], [a.max[i] for i in perm])
        pb = BoxF([b.min[i] for i in perm], [b.max[i] for i in perm])
        assert iou(pa, pb) == pytest.approx(value)


def test_iou_matrix_agrees_with_iou():
    rng = np.random.default_rng(9)
    boxes = [_random_box(rng) for _ in range(6)]
    others = [_random_box(rng) for _ in range(4)]
    matrix = iou_matrix(boxes, others)
    assert matrix.shape == (6, 4)
    for i, a in enumerate(boxes):
        for j, b in enumerate(others):
            assert matrix[i, j] == iou(a, b)
    assert iou_matrix([], others).shape == (0, 4)


def test_score_range_enforced():
    with pytest.raises(ValueError):
        _box(0, 0, 0, 1, 1, 1, score=1.5)


def test_sort_key_orders_by_score_then_corners():
    boxes = [
        _box(5, 0, 0, 6, 1, 1, score=0.5),
        _box(0, 0, 0, 1, 1, 1, score=0.9),
        _box(1, 0, 0, 2, 1, 1, score=0.5),
    ]
    ordered = sorted(boxes, key=BoxF.sort_key)
    assert [b.min[0] for b in ordered] == [0, 1, 5]


def test_clip_and_contains():
    box = _box(-2, 3, 4, 5, 12, 6)
    clipped = box.clip((4, 10, 10))
    assert clipped == _box(0, 3, 4, 4, 10, 6)
    assert box.contains(clipped)
    assert _box(20, 0, 0, 22, 1, 1).clip((10, 10, 10)) is None


def test_scale_boxes_keeps_score():
    boxes = [_box(2, 4, 6, 4, 8, 10, score=0.7)]
    scaled = scale_boxes(boxes, (1.0, 1.0, 1.0), (2.0, 2.0, 0.5))
    assert scaled == [_box(1, 2, 12, 2, 4, 20, score=0.7)]
