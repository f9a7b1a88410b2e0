"""Tests for spacing-tolerant resampling."""

import os
import sys
import warnings

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from volumes.resample import (  # noqa: E402
    needs_resampling,
    preprocess_volume,
    resample,
    resampled_shape,
    zoom_to_shape,
)
from volumes.volume import Volume  # noqa: E402

TARGET = (1.40, 1.43, 1.43)


@pytest.mark.parametrize(
    "spacing, expected",
    [
        ((1.40, 1.43, 1.43), False),
        ((1.40, 1.43, 1.60), True),
        ((1.45, 1.43, 1.43), False),
    ],
)
def test_needs_resampling(spacing, expected):
    assert needs_resampling(spacing, TARGET) is expected


def test_needs_resampling_zero_tolerance():
    """Tolerance 0 only accepts exact equality."""
    assert not needs_resampling(TARGET, TARGET, tolerance=0.0)
    assert needs_resampling((1.40, 1.43, 1.4300001), TARGET, tolerance=0.0)


def test_needs_resampling_rejects_non_positive():
    with pytest.raises(ValueError):
        needs_resampling((0.0, 1.0, 1.0), TARGET)
    with pytest.raises(ValueError):
        needs_resampling(TARGET, (1.0, -1.0, 1.0))


def test_resampled_shape_rounds_half_away():
    assert resampled_shape((64, 64, 64), (0.715,) * 3, (1.43,) * 3) == (
        32,
        32,
        32,
    )
    assert resampled_shape((5, 3, 1), (1.0,) * 3, (2.0,) * 3) == (3, 2, 1)


def test_resample_halves_shape():
    vol = Volume(np.zeros((64, 64, 64)), spacing=(0.715,) * 3)
    out = resample(vol, (1.43, 1.43, 1.43))
    assert out.shape == (32, 32, 32)
    assert out.spacing == (1.43, 1.43, 1.43)


def test_zoom_samples_aligned_centres_without_warnings():
    ramp = np.broadcast_to(
        np.arange(4, dtype=np.float32)[:, None, None], (4, 3, 3)
    )
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        out = zoom_to_shape(ramp, (8, 3, 3))
    assert out.shape == (8, 3, 3)
    np.testing.assert_allclose(
        out[1:7, 1, 1], [0.25, 0.75, 1.25, 1.75, 2.25, 2.75], atol=1e-6
    )


def test_resample_constant_image():
    """A constant volume stays constant."""
    vol = Volume(np.full((10, 12, 9), 3.25), spacing=(1.0, 0.8, 2.1))
    out = resample(vol, TARGET)
    np.testing.assert_allclose(out.data, 3.25, atol=1e-6)


def test_resample_label_values_are_closed():
    rng = np.random.default_rng(3)
    data = (rng.random((16, 16, 16)) > 0.7).astype(np.uint8)
    vol = Volume(data, spacing=(0.9, 1.1, 2.0), kind="label")
    out = resample(vol, TARGET)
    assert out.is_label
    assert set(np.unique(out.data)) <= {0, 1}


def test_resample_twice_is_stable():
    rng = np.random.default_rng(5)
    vol = Volume(rng.random((20, 18, 22)), spacing=(1.0, 1.0, 1.0))
    once = resample(vol, TARGET)
    twice = resample(once, TARGET)
    assert twice.spacing == once.spacing == TARGET
    assert all(abs(a - b) <= 1 for a, b in zip(once.shape, twice.shape))


def test_preprocess_skips_within_tolerance():
    vol = Volume(np.ones((4, 4, 4)), spacing=(1.45, 1.43, 1.43))
    out, resampled = preprocess_volume(vol, TARGET)
    assert out is vol
    assert resampled is False


def test_preprocess_resamples_outside_tolerance():
    vol = Volume(np.ones((4, 4, 4)), spacing=(2.8, 1.43, 1.43))
    out, resampled = preprocess_volume(vol, TARGET)
    assert resampled is True
    assert out.shape == (8, 4, 4)
    assert out.spacing == TARGET
