"""
Pipeline run configuration.

Every option of a run lives in one :class:`PipelineConfig` with the published
values as defaults. Configurations are stored as YAML (``.yaml``/``.yml``)
or JSON (anything else) and round-trip losslessly.
"""

import json
import logging
import os

import yaml
from attrs import asdict, field, fields, frozen

from config.augmentation_schemes import AUGMENTATION_SCHEMES
from config.pipeline_defaults import (
    DETECTOR_MIN_VOXELS,
    DETECTOR_THRESHOLD,
    ENSEMBLE_IOU,
    EVAL_IOU,
    FP_POINTS,
    LARGE_PATCH_SIZE,
    SPACING_TOLERANCE,
    STITCH_IOU,
    TARGET_SPACING,
    TILE_OVERLAP,
)
from utilities.errors import ConfigError
from utilities.validators import (
    validate_enum,
    validate_probability,
    validate_range,
    validate_vector,
)

logger = logging.getLogger(__name__)


def _spacing(values):
    return validate_vector("target_spacing", values, positive=True)


def _patch(name):
    def convert(values):
        if values is None:
            return None
        return validate_vector(name, values, positive=True, integer=True)

    return convert


def _probabilities(name):
    def convert(values):
        values = tuple(validate_probability(name, v) for v in values)
        if not values:
            raise ValueError(f"{name} must not be empty")
        return values

    return convert


def _fp_points(values):
    values = tuple(validate_range("fp_points", v, low=0.0) for v in values)
    if not values:
        raise ValueError("fp_points must not be empty")
    return values


def _positive(name):
    def convert(value):
        if value is None:
            return None
        value = validate_range(name, value, low=0.0)
        if value <= 0:
            raise ValueError(f"{name} must be positive")
        return value

    return convert


def _workers(value):
    if value is None:
        return None
    value = int(value)
    if value < 1:
        raise ValueError("workers must be at least 1")
    return value


def _scheme(value):
    # built-in name or a scheme file
    value = str(value)
    if value not in AUGMENTATION_SCHEMES and not value.endswith(
        (".json", ".yaml", ".yml")
    ):
        validate_enum("augmentation_scheme", AUGMENTATION_SCHEMES)(value)
    return value


@frozen
class PipelineConfig:
    target_spacing: tuple = field(default=TARGET_SPACING, converter=_spacing)
    spacing_tolerance: float = field(
        default=SPACING_TOLERANCE,
        converter=lambda v: validate_range("spacing_tolerance", v, low=0.0),
    )
    patch_size: tuple = field(
        default=LARGE_PATCH_SIZE, converter=_patch("patch_size")
    )
    tile_overlap: float = field(
        default=TILE_OVERLAP,
        converter=lambda v: validate_range(
            "tile_overlap", v, 0.0, 1.0, high_inclusive=False
        ),
    )
    augmentation_scheme: str = field(default="A", converter=_scheme)
    stitch_iou: float = field(
        default=STITCH_IOU,
        converter=lambda v: validate_probability("stitch_iou", v),
    )
    ensemble_iou: float = field(
        default=ENSEMBLE_IOU,
        converter=lambda v: validate_probability("ensemble_iou", v),
    )
    eval_iou: tuple = field(
        default=EVAL_IOU, converter=_probabilities("eval_iou")
    )
    fp_points: tuple = field(default=FP_POINTS, converter=_fp_points)
    seed: int = field(default=0, converter=int)
    detector_threshold: float = field(
        default=DETECTOR_THRESHOLD, converter=_positive("detector_threshold")
    )
    detector_min_voxels: int = field(default=DETECTOR_MIN_VOXELS, converter=int)
    ensemble: bool = field(default=False, converter=bool)
    ensemble_detector_threshold: float = field(
        default=None, converter=_positive("ensemble_detector_threshold")
    )
    ensemble_patch_size: tuple = field(
        default=None, converter=_patch("ensemble_patch_size")
    )
    write_pseudomasks: bool = field(default=True, converter=bool)
    augmentation_preview: bool = field(default=False, converter=bool)
    workers: int = field(default=None, converter=_workers)

    def to_dict(self):
        data = asdict(self)
        return {
            k: list(v) if isinstance(v, tuple) else v for k, v in data.items()
        }

    @classmethod
    def from_dict(cls, data):
        """
        Build a config from a mapping; missing keys keep their defaults.

        Raises:
            ConfigError: Unknown keys or invalid values.
        """
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(
                f"unknown configuration keys: {', '.join(unknown)}"
            )
        try:
            return cls(**data)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid configuration: {e}")


def _is_yaml(path):
    return os.path.splitext(path)[1].lower() in (".yaml", ".yml")


def load_config(path):
    """Read a :class:`PipelineConfig` from a YAML or JSON file."""
    if not os.path.exists(path):
        raise ConfigError(f"configuration file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) if _is_yaml(path) else json.load(f)
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot parse {path}: {e}")
    config = PipelineConfig.from_dict(data)
    logger.info(f"Loaded configuration from {path}")
    return config


def save_config(config, path):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        if _is_yaml(path):
            yaml.safe_dump(config.to_dict(), f, sort_keys=True)
        else:
            json.dump(config.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
    return path
