"""
Synthetic phantoms with analytically known lesions.

A phantom is a noisy background with ellipsoidal lesions of constant
intensity. The returned ground-truth boxes are the tight bounds of the voxels
each lesion covers, so a perfect detector reproduces them exactly. Generation
is a pure function of the :class:`PhantomSpec`.
"""

import logging

import numpy as np
from attrs import field, frozen

from boxes.box import BoxF
from boxes.pseudo_mask import box_from_mask, ellipsoid_region
from utilities.errors import GeometryError
from utilities.validators import validate_range, validate_vector
from volumes.volume import Volume

logger = logging.getLogger(__name__)


def _shape(values):
    return validate_vector("shape", values, positive=True, integer=True)


def _seed(value):
    value = int(value)
    if not 0 <= value < 2**64:
        raise ValueError(
            f"seed must be an unsigned 64-bit integer, got {value}"
        )
    return value


@frozen
class Lesion:
    center: tuple = field(converter=lambda v: validate_vector("center", v))
    radii: tuple = field(
        converter=lambda v: validate_vector("radii", v, positive=True)
    )
    intensity: float = field(default=1.0, converter=float)

    @property
    def box(self):
        """The box the lesion ellipsoid is inscribed in."""
        return BoxF(
            [c - r for c, r in zip(self.center, self.radii)],
            [c + r for c, r in zip(self.center, self.radii)],
        )


def _lesions(values):
    return tuple(v if isinstance(v, Lesion) else Lesion(**v) for v in values)


@frozen
class PhantomSpec:
    shape: tuple = field(converter=_shape)
    lesions: tuple = field(default=(), converter=_lesions)
    background_noise_sigma: float = field(
        default=0.0,
        converter=lambda v: validate_range("background_noise_sigma", v, 0.0),
    )
    seed: int = field(default=0, converter=_seed)
    spacing: tuple = field(
        default=(1.0, 1.0, 1.0),
        converter=lambda v: validate_vector("spacing", v, positive=True),
    )

    def __attrs_post_init__(self):
        for index, lesion in enumerate(self.lesions):
            box = lesion.box
            inside = all(
                lo >= 0 and hi <= n
                for lo, hi, n in zip(box.min, box.max, self.shape)
            )
            if not inside:
                raise GeometryError(
                    f"lesion {index} at {lesion.center} with radii "
                    f"{lesion.radii} exceeds volume {self.shape}"
                )


def generate_phantom(spec):
    """
    Render a phantom.

    Returns:
        tuple: ``(Volume, [BoxF, ...])`` with one box per lesion, in lesion
        order. Lesion voxels take the lesion intensity exactly; the noise is
        only visible in the background.
    """
    if spec.background_noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        data = rng.normal(0.0, spec.background_noise_sigma, spec.shape)
        data = data.astype(np.float32)
    else:
        data = np.zeros(spec.shape, dtype=np.float32)

    boxes = []
    for index, lesion in enumerate(spec.lesions):
        slices, inside = ellipsoid_region(lesion.box, spec.shape)
        if slices is None or not inside.any():
            raise GeometryError(f"lesion {index} covers no voxel centre")
        data[slices][inside] = np.float32(lesion.intensity)
        local = box_from_mask(inside.astype(np.uint8), 1)
        offset = [s.start for s in slices]
        boxes.append(local.translate(offset))

    logger.debug(
        f"Generated phantom {spec.shape} with {len(boxes)} lesions "
        f"(seed {spec.seed})"
    )
    return Volume(data, spacing=spec.spacing, kind="image"), boxes


def random_phantom_spec(
    shape,
    max_lesions=3,
    radius_range=(4.0, 16.0),
    intensity=1.0,
    noise_sigma=0.05,
    seed=0,
    spacing=(1.0, 1.0, 1.0),
    min_lesions=1,
    max_attempts=1000,
):
    """
    Draw a :class:`PhantomSpec` with well separated lesions.

    Lesion boxes keep a gap of at least two voxels on some axis from each
    other, so their ellipsoids never touch and stay separate components.
    Centres and radii are integers, which keeps every ground-truth box integer
    aligned.
    """
    shape = validate_vector("shape", shape, positive=True, integer=True)
    rng = np.random.default_rng(seed)
    count = int(rng.integers(min_lesions, max_lesions + 1))
    low, high = int(radius_range[0]), int(radius_range[1])

    lesions = []
    attempts = 0
    while len(lesions) < count:
        attempts += 1
        if attempts > max_attempts:
            raise GeometryError(
                f"could not place {count} separated lesions in {shape}"
            )
        radii = [int(rng.integers(low, high + 1)) for _ in range(3)]
        if any(2 * r >= n for r, n in zip(radii, shape)):
            continue
        center = [int(rng.integers(r, n - r + 1)) for r, n in zip(radii, shape)]
        candidate = Lesion(center, radii, intensity)
        if all(_separated(candidate.box, other.box) for other in lesions):
            lesions.append(candidate)

    return PhantomSpec(
        shape=shape,
        lesions=lesions,
        background_noise_sigma=noise_sigma,
        seed=seed,
        spacing=spacing,
    )


def _separated(a, b, gap=2.0):
    return any(
        a_lo >= b_hi + gap or b_lo >= a_hi + gap
        for a_lo, a_hi, b_lo, b_hi in zip(a.min, a.max, b.min, b.max)
    )
