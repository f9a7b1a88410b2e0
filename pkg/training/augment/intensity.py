"""
Intensity augmentation.

Transforms run in table row order. Those that need randomness beyond their
magnitude (noise, gradient direction, local gamma ball, low resolution
factors) draw it from a generator seeded with ``params.seed``, so the result
is a pure function of the image and the parameters. Masks and boxes are never
touched here.
"""

import logging

import numpy as np
from scipy import ndimage

from config.intensity_defaults import LOCAL_GAMMA_RADIUS, SHARPENING_SIGMA
from utilities.core.shared_utils import round_half_away
from volumes.resample import zoom_to_shape

logger = logging.getLogger(__name__)


def _intensity_scale(data):
    std = float(data.std())
    return std if std > 0 else 1.0


def _normalized(data):
    low, high = float(data.min()), float(data.max())
    span = high - low
    if span <= 0:
        return None, low, span
    return (data - low) / span, low, span


def _gaussian_noise(data, sigma, rng):
    noise = rng.normal(0.0, sigma * _intensity_scale(data), data.shape)
    return data + noise


def _gaussian_blur(data, sigma, rng):
    return ndimage.gaussian_filter(data, sigma, mode="nearest")


def _median_filter(data, radius, rng):
    return ndimage.median_filter(data, size=2 * int(radius) + 1, mode="nearest")


def _multiplicative_brightness(data, factor, rng):
    return data * factor


def _brightness_gradient(data, amplitude, rng):
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction) or 1.0
    ramp = np.zeros(data.shape, dtype=np.float64)
    for axis, n in enumerate(data.shape):
        coords = (np.arange(n) + 0.5) / n * 2.0 - 1.0
        view = [1, 1, 1]
        view[axis] = n
        ramp = ramp + direction[axis] * coords.reshape(view)
    return data + amplitude * _intensity_scale(data) * ramp


def _contrast(data, factor, rng):
    mean = data.mean()
    return (data - mean) * factor + mean


def _simulate_low_resolution(data, factor, rng):
    low = tuple(max(1, round_half_away(n / factor)) for n in data.shape)
    coarse = zoom_to_shape(data, low, order=0)
    return zoom_to_shape(coarse, data.shape, order=1)


def _gamma(data, exponent, rng, invert=False):
    norm, low, span = _normalized(data)
    if norm is None:
        return data
    if invert:
        norm = 1.0 - (1.0 - norm) ** exponent
    else:
        norm = norm**exponent
    return norm * span + low


def _inverse_gamma(data, exponent, rng):
    return _gamma(data, exponent, rng, invert=True)


def _local_gamma(data, exponent, rng):
    radius = rng.uniform(*LOCAL_GAMMA_RADIUS) * min(data.shape)
    centre = [rng.uniform(0, n) for n in data.shape]
    grids = np.ogrid[tuple(slice(0, n) for n in data.shape)]
    dist = sum(((g + 0.5) - c) ** 2 for g, c in zip(grids, centre))
    inside = dist <= radius**2
    if not inside.any():
        return data
    out = np.array(data, dtype=np.float64)
    out[inside] = _gamma(data, exponent, rng)[inside]
    return out


def _sharpening(data, amount, rng):
    blurred = ndimage.gaussian_filter(data, SHARPENING_SIGMA, mode="nearest")
    return data + amount * (data - blurred)


INTENSITY_FUNCTIONS = {
    "gaussian_noise": _gaussian_noise,
    "gaussian_blur": _gaussian_blur,
    "median_filter": _median_filter,
    "multiplicative_brightness": _multiplicative_brightness,
    "brightness_gradient": _brightness_gradient,
    "contrast": _contrast,
    "simulate_low_resolution": _simulate_low_resolution,
    "gamma": _gamma,
    "inverse_gamma": _inverse_gamma,
    "local_gamma": _local_gamma,
    "sharpening": _sharpening,
}


def apply_intensity(image, params):
    """Apply the intensity entries of ``params`` to an image volume."""
    if image.is_label:
        raise ValueError("intensity augmentation needs an image volume")
    if not params.intensity:
        return image

    rng = np.random.default_rng(params.seed)
    data = image.data.astype(np.float64)
    for transform_id, magnitude in params.intensity:
        data = INTENSITY_FUNCTIONS[transform_id](data, magnitude, rng)
        logger.debug(f"Applied {transform_id} with magnitude {magnitude:.4g}")
    return image.with_data(data.astype(np.float32))
