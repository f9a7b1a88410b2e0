"""Augmentation scheme tables.

Each entry is ``(transform_id, probability, magnitude)`` in table row order.
Rotation magnitudes are in degrees, scaling magnitudes are zoom factors. A
magnitude of ``None`` means the table gives only a probability; the value is
then taken from :mod:`config.intensity_defaults`. Elastic deformation is not
part of either scheme.
"""

SPATIAL_TRANSFORMS = (
    "rotation",
    "scaling",
    "rotation90",
    "transpose",
    "mirror",
)

INTENSITY_TRANSFORMS = (
    "gaussian_noise",
    "gaussian_blur",
    "median_filter",
    "multiplicative_brightness",
    "brightness_gradient",
    "contrast",
    "simulate_low_resolution",
    "gamma",
    "inverse_gamma",
    "local_gamma",
    "sharpening",
)

# Table row order; "mirror" probability is per axis.
TRANSFORM_ORDER = (
    SPATIAL_TRANSFORMS[:-1] + INTENSITY_TRANSFORMS + SPATIAL_TRANSFORMS[-1:]
)

AUGMENTATION_SCHEMES = {
    # Baseline
    "A": (
        ("rotation", 0.3, (-30.0, 30.0)),
        ("scaling", 0.2, (0.7, 1.4)),
        ("gaussian_noise", 0.1, None),
        ("gaussian_blur", 0.2, None),
        ("multiplicative_brightness", 0.15, None),
        ("contrast", 0.15, None),
        ("gamma", 0.3, None),
        ("inverse_gamma", 0.1, None),
        ("mirror", 0.5, None),
    ),
    # Reduced rotation
    "B": (
        ("rotation", 0.1, (-10.0, 10.0)),
        ("scaling", 0.3, (0.65, 1.6)),
        ("rotation90", 0.5, None),
        ("transpose", 0.5, None),
        ("gaussian_noise", 0.1, None),
        ("gaussian_blur", 0.2, None),
        ("median_filter", 0.2, None),
        ("brightness_gradient", 0.3, None),
        ("contrast", 0.2, None),
        ("simulate_low_resolution", 0.15, None),
        ("gamma", 0.1, None),
        ("inverse_gamma", 0.1, None),
        ("local_gamma", 0.3, None),
        ("sharpening", 0.2, None),
        ("mirror", 0.5, None),
    ),
}
