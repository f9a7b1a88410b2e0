"""
Augmentation package.

Scheme tables, parameter draws and the spatial and intensity transforms that
move an image, its instance mask and its boxes together.
"""

from training.augment.compose import augment_sample, augment_with_scheme
from training.augment.intensity import apply_intensity
from training.augment.params import AugParams, draw_params
from training.augment.sample import Sample
from training.augment.schemes import (
    AugEntry,
    AugScheme,
    load_scheme,
    resolve_scheme,
    save_scheme,
    scheme_table,
)
from training.augment.spatial import apply_spatial, transform_box

__all__ = [
    "AugEntry",
    "AugScheme",
    "AugParams",
    "Sample",
    "scheme_table",
    "load_scheme",
    "save_scheme",
    "resolve_scheme",
    "draw_params",
    "apply_spatial",
    "apply_intensity",
    "augment_sample",
    "augment_with_scheme",
    "transform_box",
]
