"""Magnitude ranges for transforms whose table row gives only a probability.

All ranges are ``(low, high)`` for a uniform draw. Values relative to the
image intensity standard deviation are marked; a constant image uses a scale
of 1.0 instead.
"""

INTENSITY_MAGNITUDES = {
    "gaussian_noise": (0.0, 0.1),  # sigma, fraction of intensity std
    "gaussian_blur": (0.5, 1.5),  # sigma in voxels
    "median_filter": (1, 1),  # radius in voxels
    "multiplicative_brightness": (0.75, 1.25),
    "brightness_gradient": (-0.3, 0.3),  # amplitude, fraction of intensity std
    "contrast": (0.75, 1.25),  # factor about the mean
    "simulate_low_resolution": (1.0, 2.0),  # downsample factor
    "gamma": (0.7, 1.5),
    "inverse_gamma": (0.7, 1.5),
    "local_gamma": (0.7, 1.5),
    "sharpening": (0.5, 1.5),  # unsharp-mask amount
}

# Local gamma ball radius, fraction of the smallest image extent
LOCAL_GAMMA_RADIUS = (0.1, 0.4)

SHARPENING_SIGMA = 1.0

# Draw laws for the right-angle transforms the table leaves open
ROTATION90_K = (1, 2, 3)
ROTATION90_PLANES = ((0, 1), (0, 2), (1, 2))
