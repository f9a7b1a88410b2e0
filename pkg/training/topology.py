"""
Encoder/decoder topology planning.

The planner reproduces the architecture arithmetic of a widened detection
U-Net: level ``l`` carries ``min(round(base * widen) * 2**l, max_channels)``
channels, every axis is downsampled by 2 while it stays divisible, and the
decoder mirrors the encoder with transposed convolutions. It never builds or
runs a network.
"""

import json
import logging

from attrs import field, frozen

from config.pipeline_defaults import (
    BASE_CHANNELS,
    HEAD_LEVELS,
    KERNEL_SIZE,
    MAX_CHANNELS,
    N_LEVELS,
    SEG_HEAD_LEVEL,
    WIDEN_FACTOR,
)
from utilities.core.shared_utils import round_half_away
from utilities.errors import TopologyError
from utilities.validators import validate_vector

logger = logging.getLogger(__name__)

UPSAMPLE_MODE = "transposed_convolution"


def _ints(name):
    return lambda v: validate_vector(name, v, positive=True, integer=True)


@frozen
class EncoderLevel:
    level: int
    spatial_size: tuple = field(converter=_ints("spatial size"))
    channels: int
    stride: tuple = field(converter=_ints("stride"))
    kernel_size: tuple = field(converter=_ints("kernel size"))

    def to_dict(self):
        return {
            "level": self.level,
            "spatial_size": list(self.spatial_size),
            "channels": self.channels,
            "stride": list(self.stride),
            "kernel_size": list(self.kernel_size),
        }


@frozen
class DecoderLevel:
    level: int
    spatial_size: tuple = field(converter=_ints("spatial size"))
    channels: int
    upsample_stride: tuple = field(converter=_ints("upsample stride"))
    upsample: str = UPSAMPLE_MODE

    def to_dict(self):
        return {
            "level": self.level,
            "spatial_size": list(self.spatial_size),
            "channels": self.channels,
            "upsample": self.upsample,
            "upsample_stride": list(self.upsample_stride),
        }


@frozen
class TopologyPlan:
    """Per-level sizes and channels of the encoder and the mirrored decoder."""

    patch_size: tuple
    base_channels: int
    widen_factor: float
    max_channels: int
    levels: tuple = field(converter=tuple)
    decoder_levels: tuple = field(converter=tuple)
    heads_on_levels: tuple = field(converter=tuple)
    segmentation_head: int = SEG_HEAD_LEVEL

    def __attrs_post_init__(self):
        if len(self.levels) < 2:
            raise TopologyError("a topology needs at least two levels")
        for prev, cur in zip(self.levels, self.levels[1:]):
            shrinks = any(
                b < a for a, b in zip(prev.spatial_size, cur.spatial_size)
            )
            grows = any(
                b > a for a, b in zip(prev.spatial_size, cur.spatial_size)
            )
            if not shrinks or grows:
                raise TopologyError(
                    f"level {cur.level} does not shrink: "
                    f"{prev.spatial_size} -> {cur.spatial_size}"
                )
            if cur.channels < prev.channels:
                raise TopologyError(f"channels decrease at level {cur.level}")
        if self.max_channels is not None:
            if any(lvl.channels > self.max_channels for lvl in self.levels):
                raise TopologyError("channel count exceeds the cap")

    @property
    def channels(self):
        return [lvl.channels for lvl in self.levels]

    @property
    def sizes(self):
        return [lvl.spatial_size for lvl in self.levels]

    def to_dict(self):
        return {
            "patch_size": list(self.patch_size),
            "base_channels": self.base_channels,
            "widen_factor": self.widen_factor,
            "max_channels": self.max_channels,
            "n_levels": len(self.levels),
            "levels": [lvl.to_dict() for lvl in self.levels],
            "decoder_levels": [lvl.to_dict() for lvl in self.decoder_levels],
            "detection_heads": list(self.heads_on_levels),
            "segmentation_head": self.segmentation_head,
        }


def _kernel_sizes(kernel_sizes, n_levels):
    if kernel_sizes is None:
        kernel_sizes = KERNEL_SIZE
    if isinstance(kernel_sizes, int):
        return [(kernel_sizes,) * 3] * n_levels
    kernel_sizes = list(kernel_sizes)
    if len(kernel_sizes) != n_levels:
        raise TopologyError(
            f"{len(kernel_sizes)} kernel sizes given for {n_levels} levels"
        )
    return [(k,) * 3 if isinstance(k, int) else tuple(k) for k in kernel_sizes]


def plan_topology(
    patch_size,
    base_channels=BASE_CHANNELS,
    widen_factor=WIDEN_FACTOR,
    max_channels=MAX_CHANNELS,
    n_levels=N_LEVELS,
    kernel_sizes=None,
    head_levels=HEAD_LEVELS,
    segmentation_head=SEG_HEAD_LEVEL,
):
    """
    Plan encoder and decoder levels for ``patch_size``.

    Parameters:
        patch_size (tuple): Network input size (z, y, x).
        base_channels (int): Channels of the unwidened first level.
        widen_factor (float): Multiplier applied to ``base_channels``.
        max_channels (int or None): Channel cap; ``None`` disables it.
        n_levels (int): Number of encoder levels including the input level.
        kernel_sizes: One int for all levels or one entry per level.
        head_levels: Levels carrying detection heads; levels that do not
            exist are skipped.

    Raises:
        TopologyError: Fewer than two levels, bad sizes, or an axis set that
            can no longer be downsampled.

    Example:
        >>> plan_topology((192, 192, 192)).channels
        [48, 96, 192, 384, 384, 384]
    """
    try:
        patch_size = validate_vector(
            "patch size", patch_size, positive=True, integer=True
        )
    except ValueError as e:
        raise TopologyError(str(e))
    n_levels = int(n_levels)
    if n_levels < 2:
        raise TopologyError(f"n_levels must be at least 2, got {n_levels}")
    if base_channels <= 0 or widen_factor <= 0:
        raise TopologyError("base channels and widen factor must be positive")
    if max_channels is not None and max_channels <= 0:
        raise TopologyError("max channels must be positive")

    widened = round_half_away(base_channels * widen_factor)
    kernels = _kernel_sizes(kernel_sizes, n_levels)

    levels = []
    size = patch_size
    for level in range(n_levels):
        if level == 0:
            stride = (1, 1, 1)
        else:
            stride = tuple(2 if n % 2 == 0 else 1 for n in size)
            if stride == (1, 1, 1):
                raise TopologyError(
                    f"cannot downsample {size} further at level {level}"
                )
            size = tuple(n // s for n, s in zip(size, stride))
        channels = widened * 2**level
        if max_channels is not None:
            channels = min(channels, int(max_channels))
        levels.append(
            EncoderLevel(level, size, channels, stride, kernels[level])
        )

    decoder = [
        DecoderLevel(
            lvl.level,
            lvl.spatial_size,
            lvl.channels,
            levels[lvl.level + 1].stride,
        )
        for lvl in reversed(levels[:-1])
    ]
    heads = tuple(int(h) for h in head_levels if 0 <= int(h) < n_levels)

    plan = TopologyPlan(
        patch_size=patch_size,
        base_channels=int(base_channels),
        widen_factor=float(widen_factor),
        max_channels=None if max_channels is None else int(max_channels),
        levels=levels,
        decoder_levels=decoder,
        heads_on_levels=heads,
        segmentation_head=int(segmentation_head),
    )
    logger.debug(f"Planned topology for {patch_size}: channels {plan.channels}")
    return plan


def plan_summary(plan):
    """Stable JSON text of ``plan`` (sorted keys, two-space indent)."""
    return json.dumps(plan.to_dict(), sort_keys=True, indent=2) + "\n"
