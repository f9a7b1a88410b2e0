"""
Pipeline package.

Run configuration, dataset manifests and the stage runner that chains
preprocessing, pseudo masks, augmentation previews, tiled detection,
ensembling and FROC evaluation.
"""

from pipeline.config import PipelineConfig, load_config, save_config
from pipeline.manifest import (
    Manifest,
    ManifestEntry,
    load_manifest,
    write_manifest,
)
from pipeline.runner import STAGES, run_pipeline

__all__ = [
    "PipelineConfig",
    "load_config",
    "save_config",
    "Manifest",
    "ManifestEntry",
    "load_manifest",
    "write_manifest",
    "STAGES",
    "run_pipeline",
]
