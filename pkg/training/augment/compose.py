"""Full augmentation of a sample: spatial transforms, then intensity."""

from training.augment.intensity import apply_intensity
from training.augment.params import draw_params
from training.augment.sample import Sample
from training.augment.spatial import apply_spatial


def augment_sample(sample, params):
    """Apply ``params`` to a :class:`Sample`; the mask only moves spatially."""
    moved = apply_spatial(sample, params)
    return Sample(
        apply_intensity(moved.image, params), moved.mask, moved.boxes
    )


def augment_with_scheme(sample, scheme, rng_seed=None):
    """Draw parameters from ``scheme`` and apply them."""
    params = draw_params(scheme, rng_seed)
    return augment_sample(sample, params), params
