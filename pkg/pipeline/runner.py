"""
End-to-end pipeline runs.

Stages run in a fixed order and write their artifacts into one run folder::

    config.yaml
    preprocessed/<image_id>.json|.raw
    gt_preprocessed.csv
    pseudomasks/<image_id>.json|.raw          (write_pseudomasks)
    augmented/<image_id>_image|_mask          (augmentation_preview)
    augmented/boxes.csv                       (augmentation_preview)
    predictions_a.csv
    predictions_b.csv, predictions_ensemble.csv              (ensemble)
    froc_iou_<t>.json, froc_iou_<t>.tsv
    report.json

Per-image work fans out over a worker pool and is merged in manifest order.
Nothing time dependent is written, so equal inputs give identical folders.
"""

import logging
import os
from contextlib import contextmanager

from boxes.annotations import (
    read_annotations,
    write_annotations,
    write_predictions,
)
from boxes.box import scale_boxes
from boxes.pseudo_mask import ellipsoid_mask
from evaluation.froc import evaluate_predictions
from evaluation.report import write_curve_tsv, write_json, write_report
from inference.ensemble import ensemble_fuse
from inference.stitching import detect_tiled
from pipeline.config import save_config
from pipeline.manifest import Manifest, load_manifest
from training.augment import Sample, augment_sample, draw_params, resolve_scheme
from training.sampler import extract_patch, sample_training_patch
from utilities.core.shared_utils import format_float
from utilities.errors import PipelineStageError, ToolkitError
from utilities.io.worker_pool import map_in_order
from utilities.validators import validate_enum
from volumes.mvol_io import load_volume, save_volume
from volumes.resample import preprocess_volume

logger = logging.getLogger(__name__)

STAGES = (
    "setup",
    "preprocess",
    "pseudomasks",
    "augmentation",
    "detect",
    "ensemble",
    "evaluate",
    "report",
)

_validate_stage = validate_enum("stage", STAGES)


@contextmanager
def stage(name):
    """Run a block as pipeline stage ``name``; failures name the stage."""
    _validate_stage(name)
    logger.info(f"Stage '{name}' started")
    try:
        yield
    except PipelineStageError:
        raise
    except (ToolkitError, ValueError, OSError) as e:
        logger.error(f"Stage '{name}' failed: {e}", exc_info=True)
        raise PipelineStageError(name, e)
    logger.info(f"Stage '{name}' finished")


def _preprocess_one(entry, config, gt, folder):
    vol = load_volume(entry.path)
    out, resampled = preprocess_volume(
        vol, config.target_spacing, config.spacing_tolerance
    )
    boxes = gt.get(entry.image_id, [])
    if resampled:
        boxes = scale_boxes(boxes, vol.spacing, config.target_spacing)
    save_volume(out, os.path.join(folder, entry.image_id))
    logger.debug(
        f"Preprocessed '{entry.image_id}' {vol.shape} -> {out.shape}"
        f"{' (resampled)' if resampled else ''}"
    )
    return out, boxes


def _preview_one(image_id, vol, boxes, scheme, config, index, folder):
    """Cut a training patch around the first box and augment it."""
    if not boxes:
        return image_id, []
    seed = config.seed + index
    spec = sample_training_patch(vol.shape, boxes[0], config.patch_size, seed)
    offset = [-o for o in spec.origin]
    local = [b.translate(offset) for b in boxes]
    patch = Sample.from_boxes(
        extract_patch(vol, spec),
        [b for b in local if b.intersects_shape(spec.size)],
    )
    augmented = augment_sample(patch, draw_params(scheme, seed))
    save_volume(augmented.image, os.path.join(folder, f"{image_id}_image"))
    save_volume(augmented.mask, os.path.join(folder, f"{image_id}_mask"))
    return image_id, list(augmented.boxes)


def _iou_tag(value):
    return format_float(value)


def run_pipeline(config, manifest, run_dir):
    """
    Execute a full run.

    Parameters:
        config (PipelineConfig): Run options.
        manifest (Manifest or str): Dataset manifest or its path.
        run_dir (str): Output folder, created if missing.

    Returns:
        dict: The content written to ``report.json``.

    Raises:
        PipelineStageError: A stage failed; ``stage`` names it.
    """
    with stage("setup"):
        if not isinstance(manifest, Manifest):
            manifest = load_manifest(manifest)
        os.makedirs(run_dir, exist_ok=True)
        save_config(config, os.path.join(run_dir, "config.yaml"))
        gt = {}
        if manifest.annotations:
            gt = read_annotations(manifest.annotations)
    entries = list(manifest.volumes)
    image_ids = manifest.image_ids
    logger.info(f"Running pipeline on {len(entries)} images into {run_dir}")

    with stage("preprocess"):
        folder = os.path.join(run_dir, "preprocessed")
        results = map_in_order(
            lambda e: _preprocess_one(e, config, gt, folder),
            entries,
            config.workers,
        )
        volumes = {i: vol for i, (vol, _) in zip(image_ids, results)}
        gt_pre = {
            i: boxes for i, (_, boxes) in zip(image_ids, results) if boxes
        }
        write_annotations(os.path.join(run_dir, "gt_preprocessed.csv"), gt_pre)

    if config.write_pseudomasks:
        with stage("pseudomasks"):
            folder = os.path.join(run_dir, "pseudomasks")
            for image_id in image_ids:
                vol = volumes[image_id]
                mask = ellipsoid_mask(
                    gt_pre.get(image_id, []), vol.shape, vol.spacing, vol.origin
                )
                save_volume(mask, os.path.join(folder, image_id))

    if config.augmentation_preview:
        with stage("augmentation"):
            folder = os.path.join(run_dir, "augmented")
            scheme = resolve_scheme(config.augmentation_scheme)
            previews = map_in_order(
                lambda item: _preview_one(
                    item[1],
                    volumes[item[1]],
                    gt_pre.get(item[1], []),
                    scheme,
                    config,
                    item[0],
                    folder,
                ),
                list(enumerate(image_ids)),
                config.workers,
            )
            write_annotations(
                os.path.join(folder, "boxes.csv"),
                {i: boxes for i, boxes in previews if boxes},
            )

    with stage("detect"):
        predictions_a = _detect_all(
            volumes,
            image_ids,
            config.patch_size,
            config.detector_threshold,
            config,
        )
        write_predictions(
            os.path.join(run_dir, "predictions_a.csv"),
            _as_mapping(predictions_a),
        )
    final = predictions_a
    predictions_file = "predictions_a.csv"

    if config.ensemble:
        with stage("ensemble"):
            predictions_b = _detect_all(
                volumes,
                image_ids,
                config.ensemble_patch_size or config.patch_size,
                config.ensemble_detector_threshold or config.detector_threshold,
                config,
            )
            write_predictions(
                os.path.join(run_dir, "predictions_b.csv"),
                _as_mapping(predictions_b),
            )
            final = {
                i: ensemble_fuse(
                    predictions_a[i], predictions_b[i], config.ensemble_iou
                )
                for i in image_ids
            }
            predictions_file = "predictions_ensemble.csv"
            write_predictions(
                os.path.join(run_dir, predictions_file), _as_mapping(final)
            )

    scores = {}
    with stage("evaluate"):
        for threshold in config.eval_iou:
            curve = evaluate_predictions(
                gt_pre,
                _as_mapping(final),
                threshold,
                config.fp_points,
                image_ids=image_ids,
            )
            tag = _iou_tag(threshold)
            write_report(os.path.join(run_dir, f"froc_iou_{tag}.json"), curve)
            write_curve_tsv(os.path.join(run_dir, f"froc_iou_{tag}.tsv"), curve)
            scores[tag] = curve.score

    with stage("report"):
        report = {
            "n_images": len(image_ids),
            "n_gt": sum(len(b) for b in gt_pre.values()),
            "predictions": predictions_file,
            "ensemble": config.ensemble,
            "scores": scores,
        }
        write_json(os.path.join(run_dir, "report.json"), report)
    logger.info(f"Pipeline finished: {scores}")
    return report


def _detect_all(volumes, image_ids, patch_size, threshold, config):
    detections = map_in_order(
        lambda image_id: detect_tiled(
            volumes[image_id],
            patch_size,
            overlap=config.tile_overlap,
            intensity_threshold=threshold,
            min_voxels=config.detector_min_voxels,
            stitch_iou=config.stitch_iou,
            image_id=image_id,
        ),
        image_ids,
        config.workers,
    )
    return dict(zip(image_ids, detections))


def _as_mapping(detections):
    return {image_id: list(dets.boxes) for image_id, dets in detections.items()}
