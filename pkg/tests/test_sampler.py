"""Tests for training patch placement, extraction and tiling."""

import os
import sys

import numpy as np
import pytest
from scipy import stats

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from boxes.box import BoxF  # noqa: E402
from training.sampler import (  # noqa: E402
    CENTER,
    CONTAIN,
    PatchSpec,
    embed_patch,
    extract_patch,
    placement_branches,
    sample_training_patch,
    tile_volume,
)
from utilities.errors import GeometryError  # noqa: E402
from volumes.volume import Volume  # noqa: E402


@pytest.mark.parametrize("patch, extent", [(192, 64), (128, 89)])
def test_object_always_contained(patch, extent):
    """10^4 seeded draws keep the object inside the patch."""
    target = BoxF((96, 64, 64), (96 + extent, 64 + extent, 64 + extent))
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        spec = sample_training_patch((256, 256, 256), target, (patch,) * 3, rng)
        assert spec.contains_box(target)


def test_offsets_spread_over_the_allowed_range():
    """Origins reach both containment limits and are uniform inside them."""
    target = BoxF((64, 0, 0), (128, 8, 8))
    rng = np.random.default_rng(99)
    origins = np.array(
        [
            sample_training_patch(
                (256, 64, 64), target, (192, 64, 64), rng
            ).origin[0]
            for _ in range(10_000)
        ]
    )
    assert origins.min() == 128 - 192
    assert origins.max() == 64
    interior = origins[(origins >= -60) & (origins < 60)]
    counts = np.bincount((interior + 60) // 15, minlength=8)
    assert len(counts) == 8
    assert stats.chisquare(counts).pvalue > 0.001


def test_large_object_centres_patch_inside_object():
    target = BoxF((0, 0, 0), (192, 192, 192))
    rng = np.random.default_rng(5)
    for _ in range(1000):
        spec = sample_training_patch((256, 256, 256), target, (192,) * 3, rng)
        for c, lo, hi in zip(spec.center, target.min, target.max):
            assert lo <= c <= hi


def test_centre_branch_is_uniform_over_the_object():
    """An object of 90 voxels in a 128 patch centres on any of its voxels."""
    target = BoxF((0, 0, 0), (90, 10, 10))
    rng = np.random.default_rng(11)
    origins = np.array(
        [
            sample_training_patch((128,) * 3, target, (128,) * 3, rng)
            .origin[0]
            for _ in range(9000)
        ]
    )
    assert origins.min() == -64
    assert origins.max() == 25
    counts = np.bincount(origins + 64, minlength=90)
    assert len(counts) == 90
    assert stats.chisquare(counts).pvalue > 0.01


@pytest.mark.parametrize(
    "extent, branch", [(89, CONTAIN), (89.6, CONTAIN), (90, CENTER)]
)
def test_branch_boundary(extent, branch):
    target = BoxF((0, 0, 0), (extent, 10, 10))
    assert placement_branches(target, (128, 128, 128))[0] == branch


def test_sampling_is_seeded():
    target = BoxF((10, 20, 30), (40, 50, 60))
    a = sample_training_patch((128,) * 3, target, (64,) * 3, rng_seed=17)
    b = sample_training_patch((128,) * 3, target, (64,) * 3, rng_seed=17)
    assert a == b


def test_target_outside_volume():
    with pytest.raises(GeometryError):
        sample_training_patch(
            (32, 32, 32), BoxF((40, 0, 0), (48, 8, 8)), (16,) * 3, 0
        )


def test_extract_inside_is_exact_crop():
    data = np.arange(10 * 11 * 12, dtype=np.float32).reshape(10, 11, 12)
    vol = Volume(data, spacing=(2.0, 1.0, 0.5), origin=(1.0, 1.0, 1.0))
    patch = extract_patch(vol, PatchSpec((2, 3, 4), (4, 5, 6)))
    np.testing.assert_array_equal(patch.data, data[2:6, 3:8, 4:10])
    assert patch.origin == (5.0, 4.0, 3.0)


def test_extract_pads_outside():
    vol = Volume(np.ones((8, 8, 8)))
    patch = extract_patch(vol, PatchSpec((-4, 0, 0), (8, 8, 8)), pad_value=-7)
    assert (patch.data[:4] == -7).all()
    assert (patch.data[4:] == 1).all()


def test_extract_label_pads_with_zero():
    vol = Volume(np.ones((4, 4, 4), dtype=np.uint8), kind="label")
    patch = extract_patch(vol, PatchSpec((2, 2, 2), (4, 4, 4)), pad_value=5)
    assert set(np.unique(patch.data)) == {0, 1}


def test_extract_then_embed_restores_values():
    rng = np.random.default_rng(1)
    vol = Volume(rng.random((12, 12, 12)))
    spec = PatchSpec((-3, 5, 9), (8, 8, 8))
    restored = embed_patch(vol, extract_patch(vol, spec), spec)
    assert restored.same_as(vol)


def test_embed_rejects_wrong_size():
    vol = Volume(np.zeros((4, 4, 4)))
    with pytest.raises(GeometryError):
        embed_patch(vol, vol, PatchSpec((0, 0, 0), (2, 2, 2)))


def test_single_tile_when_patch_covers_volume():
    tiles = tile_volume((192, 192, 192), (192, 192, 192), 0.5)
    assert [t.origin for t in tiles] == [(0, 0, 0)]


def test_last_tile_is_clamped():
    tiles = tile_volume((256, 192, 192), (192, 192, 192), 0.5)
    assert sorted(t.origin[0] for t in tiles) == [0, 64]
    assert all(t.stop[0] <= 256 for t in tiles)


def test_patch_larger_than_volume():
    tiles = tile_volume((100, 100, 100), (192, 192, 192))
    assert tiles == [PatchSpec((0, 0, 0), (192, 192, 192))]


@pytest.mark.parametrize("overlap", [0.0, 0.25, 0.5, 0.9])
def test_tiles_cover_every_voxel(overlap):
    shape, size = (50, 37, 20), (16, 16, 16)
    covered = np.zeros(shape, dtype=int)
    tiles = tile_volume(shape, size, overlap)
    for tile in tiles:
        covered[tuple(slice(o, e) for o, e in zip(tile.origin, tile.stop))] += 1
    assert covered.min() >= 1

    for axis in range(3):
        starts = sorted({t.origin[axis] for t in tiles})
        for a, b in zip(starts, starts[1:]):
            assert a + size[axis] - b >= size[axis] * overlap - 1


def test_invalid_overlap():
    with pytest.raises(ValueError):
        tile_volume((10, 10, 10), (4, 4, 4), 1.0)
