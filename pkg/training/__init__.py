"""
Training package.

Patch placement and tiling, augmentation, loss functions with analytic
gradients and the network topology planner.
"""

from training.losses import (
    LossBatch,
    bce,
    ce_seg,
    dice_seg,
    loss_components,
    total_loss,
    weighted_l1,
)
from training.sampler import (
    PatchSpec,
    embed_patch,
    extract_patch,
    placement_branches,
    sample_training_patch,
    tile_volume,
)
from training.topology import TopologyPlan, plan_summary, plan_topology

__all__ = [
    "PatchSpec",
    "sample_training_patch",
    "placement_branches",
    "extract_patch",
    "embed_patch",
    "tile_volume",
    "LossBatch",
    "bce",
    "weighted_l1",
    "ce_seg",
    "dice_seg",
    "loss_components",
    "total_loss",
    "TopologyPlan",
    "plan_topology",
    "plan_summary",
]
