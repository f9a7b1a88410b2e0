"""Tests for ellipsoid pseudo masks and mask-to-box derivation."""

import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from boxes.box import BoxF  # noqa: E402
from boxes.pseudo_mask import (  # noqa: E402
    box_from_mask,
    boxes_from_mask,
    ellipsoid_mask,
    ellipsoid_touches_faces,
    relabel_instances,
)
from utilities.errors import GeometryError, InstanceNotFoundError  # noqa: E402
from volumes.volume import Volume  # noqa: E402


def _brute_force_count(box, shape):
    """Count voxel centres inside the ellipsoid inscribed in ``box``."""
    centres = np.indices(shape, dtype=np.float64) + 0.5
    total = np.zeros(shape, dtype=np.float64)
    for grid, lo, hi in zip(centres, box.min, box.max):
        total = total + ((grid - (lo + hi) / 2.0) / ((hi - lo) / 2.0)) ** 2
    return int((total <= 1.0).sum())


def test_full_box_voxel_count():
    """The ellipsoid inscribed in a 10^3 box covers 552 voxel centres."""
    box = BoxF((0, 0, 0), (10, 10, 10))
    mask = ellipsoid_mask([box], (10, 10, 10))
    assert _brute_force_count(box, (10, 10, 10)) == 552
    assert int((mask.data == 1).sum()) == 552
    assert mask.is_label


def test_small_box_covers_its_eight_voxels():
    mask = ellipsoid_mask([BoxF((4, 4, 4), (6, 6, 6))], (10, 10, 10))
    assert int((mask.data > 0).sum()) == 8
    assert mask.data[4, 5, 5] == 1
    assert mask.data[4, 4, 4] == 1
    assert mask.data[3, 5, 5] == 0


def test_empty_box_list():
    mask = ellipsoid_mask([], (4, 5, 6))
    assert mask.shape == (4, 5, 6)
    assert not mask.data.any()


def test_later_boxes_overwrite_earlier():
    boxes = [BoxF((0, 0, 0), (8, 8, 8)), BoxF((2, 2, 2), (6, 6, 6))]
    mask = ellipsoid_mask(boxes, (8, 8, 8))
    assert mask.data[4, 4, 4] == 2
    assert mask.data[4, 4, 0] == 1


def test_box_outside_volume_rejected():
    with pytest.raises(GeometryError):
        ellipsoid_mask([BoxF((20, 0, 0), (25, 4, 4))], (10, 10, 10))


def test_degenerate_box_rejected():
    with pytest.raises(GeometryError, match="degenerate"):
        BoxF((1, 1, 1), (1, 2, 2))


def test_mask_keeps_geometry():
    mask = ellipsoid_mask(
        [BoxF((1, 1, 1), (3, 3, 3))],
        (4, 4, 4),
        spacing=(1.4, 1.43, 1.43),
        origin=(1.0, 2.0, 3.0),
    )
    assert mask.spacing == (1.4, 1.43, 1.43)
    assert mask.origin == (1.0, 2.0, 3.0)


def test_round_trip_full_box():
    box = BoxF((0, 0, 0), (10, 10, 10))
    mask = ellipsoid_mask([box], (10, 10, 10))
    assert box_from_mask(mask, 1) == box


def test_single_voxel_box():
    data = np.zeros((8, 8, 8), dtype=np.uint8)
    data[3, 4, 5] = 1
    mask = Volume(data, kind="label")
    assert box_from_mask(mask, 1) == BoxF((3, 4, 5), (4, 5, 6))


def test_missing_instance():
    mask = ellipsoid_mask([BoxF((0, 0, 0), (4, 4, 4))], (4, 4, 4))
    with pytest.raises(InstanceNotFoundError):
        box_from_mask(mask, 2)
    with pytest.raises(KeyError):
        box_from_mask(mask, 2)


def test_random_boxes_round_trip():
    """Counts match enumeration and full ellipsoids recover their box."""
    rng = np.random.default_rng(1234)
    shape = (64, 64, 64)
    exact = 0
    for _ in range(200):
        lo = rng.integers(0, 60, size=3)
        extent = [int(rng.integers(1, 64 - v + 1)) for v in lo]
        box = BoxF(lo, [a + e for a, e in zip(lo, extent)])
        mask = ellipsoid_mask([box], shape)
        assert int((mask.data == 1).sum()) == _brute_force_count(box, shape)
        recovered = box_from_mask(mask, 1)
        assert box.contains(recovered)
        if ellipsoid_touches_faces(box):
            assert recovered == box
            exact += 1
        if all(e % 2 == 1 for e in extent):
            assert recovered == box
    assert exact > 0


def test_foreground_inside_generating_box():
    box = BoxF((3, 5, 7), (17, 12, 30))
    mask = ellipsoid_mask([box], (20, 20, 40))
    z, y, x = np.nonzero(mask.data)
    assert z.min() >= 3 and z.max() < 17
    assert y.min() >= 5 and y.max() < 12
    assert x.min() >= 7 and x.max() < 30


def test_fill_fraction_approaches_sphere_ratio():
    mask = ellipsoid_mask([BoxF((0, 0, 0), (50, 50, 50))], (50, 50, 50))
    fraction = (mask.data > 0).sum() / 50**3
    assert abs(fraction - math.pi / 6) <= 0.02


def test_boxes_from_mask_and_relabel():
    data = np.zeros((10, 10, 10), dtype=np.uint16)
    data[1:3, 1:3, 1:3] = 4
    data[6:9, 5:6, 2:7] = 9
    found = boxes_from_mask(data)
    assert found[4] == BoxF((1, 1, 1), (3, 3, 3))
    assert found[9] == BoxF((6, 5, 2), (9, 6, 7))

    relabelled, boxes = relabel_instances(data)
    assert set(np.unique(relabelled)) == {0, 1, 2}
    assert boxes == [found[4], found[9]]
