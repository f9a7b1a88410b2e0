"""
Volumes package.

Volume representation, MVOL file I/O and spacing-tolerant resampling. Axis
order is (z, y, x) everywhere. Phantom generation lives in
:mod:`volumes.phantom`; it depends on :mod:`boxes` and is imported directly.
"""

from volumes.mvol_io import load_volume, save_volume
from volumes.resample import (
    needs_resampling,
    preprocess_volume,
    resample,
    zoom_to_shape,
)
from volumes.volume import Volume

__all__ = [
    "Volume",
    "load_volume",
    "save_volume",
    "needs_resampling",
    "resample",
    "preprocess_volume",
    "zoom_to_shape",
]
