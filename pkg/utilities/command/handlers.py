"""
Subcommand handlers.

Every handler takes the parsed arguments and returns ``(result, lines)``:
a JSON-ready dictionary for ``--json`` output and the text lines printed
otherwise. Errors propagate as toolkit exceptions and are reported by
``main``.
"""

import json
import logging
import os

import attrs
import numpy as np

from boxes.annotations import (
    read_annotations,
    read_patch_predictions,
    read_predictions,
    write_annotations,
    write_predictions,
)
from boxes.box import BoxF, scale_boxes
from boxes.pseudo_mask import ellipsoid_mask
from evaluation.folds import fold_assignment, split_folds, write_folds
from evaluation.froc import evaluate_predictions
from evaluation.report import froc_report, write_curve_tsv, write_report
from inference.blob_detector import blob_detect
from inference.detection_set import DetectionSet
from inference.ensemble import ensemble_fuse
from inference.stitching import detect_tiled, stitch
from pipeline.config import PipelineConfig, load_config
from pipeline.manifest import (
    Manifest,
    ManifestEntry,
    load_manifest,
    write_manifest,
)
from pipeline.runner import run_pipeline
from training.augment import Sample, augment_sample, draw_params, resolve_scheme
from training.sampler import (
    placement_branches,
    sample_training_patch,
    tile_volume,
)
from training.topology import plan_summary, plan_topology
from utilities.errors import AnnotationFormatError
from utilities.io.worker_pool import map_in_order
from volumes.mvol_io import load_volume, mvol_paths, save_volume
from volumes.phantom import generate_phantom, random_phantom_spec
from volumes.resample import preprocess_volume

logger = logging.getLogger(__name__)


def _image_id(path):
    return os.path.basename(mvol_paths(path)[0])[: -len(".json")]


def handle_phantom_gen(args):
    os.makedirs(args.out, exist_ok=True)

    def make(index):
        image_id = f"phantom_{index:03d}"
        spec = random_phantom_spec(
            args.shape,
            max_lesions=args.max_lesions,
            radius_range=args.radius_range,
            intensity=args.intensity,
            noise_sigma=args.noise,
            seed=args.seed * 100003 + index,
            spacing=args.spacing,
        )
        vol, boxes = generate_phantom(spec)
        path = save_volume(vol, os.path.join(args.out, "volumes", image_id))
        return ManifestEntry(image_id, path), boxes

    results = map_in_order(make, range(args.count))
    gt_path = os.path.join(args.out, "gt.csv")
    write_annotations(gt_path, {e.image_id: boxes for e, boxes in results})
    manifest_path = write_manifest(
        os.path.join(args.out, "manifest.json"),
        Manifest([e for e, _ in results], annotations=os.path.abspath(gt_path)),
    )
    n_lesions = sum(len(boxes) for _, boxes in results)
    result = {
        "manifest": manifest_path,
        "annotations": gt_path,
        "volumes": len(results),
        "lesions": n_lesions,
    }
    return result, [
        f"Wrote {len(results)} phantoms with {n_lesions} lesions",
        f"Manifest: {manifest_path}",
    ]


def handle_preprocess(args):
    vol = load_volume(args.input)
    out, resampled = preprocess_volume(vol, args.spacing, args.tolerance)
    path = save_volume(out, args.out)
    result = {
        "output": path,
        "resampled": resampled,
        "shape": list(out.shape),
        "spacing": list(out.spacing),
    }
    if args.gt:
        gt = read_annotations(args.gt)
        for image_id, boxes in gt.items():
            if resampled and args.image_id in (None, image_id):
                gt[image_id] = scale_boxes(boxes, vol.spacing, out.spacing)
        gt_out = args.gt_out or os.path.splitext(path)[0] + "_gt.csv"
        write_annotations(gt_out, gt)
        result["annotations"] = gt_out
    verb = "Resampled" if resampled else "Kept"
    return result, [f"{verb} {vol.shape} -> {out.shape}, wrote {path}"]


def _boxes_for(gt_path, image_id):
    gt = read_annotations(gt_path)
    if image_id not in gt:
        raise AnnotationFormatError(
            f"no boxes for image '{image_id}' in {gt_path}"
        )
    return gt[image_id]


def handle_pseudomask(args):
    vol = load_volume(args.input)
    boxes = _boxes_for(args.gt, args.image_id)
    mask = ellipsoid_mask(boxes, vol.shape, vol.spacing, vol.origin)
    path = save_volume(mask, args.out)
    voxels = int((mask.data > 0).sum())
    return (
        {"output": path, "instances": len(boxes), "voxels": voxels},
        [f"Wrote mask with {len(boxes)} instances ({voxels} voxels) to {path}"],
    )


def handle_sample_patches(args):
    target = BoxF.from_array(args.box)
    patches = []
    rng = np.random.default_rng(args.seed)
    for _ in range(args.count):
        spec = sample_training_patch(args.shape, target, args.patch, rng)
        patches.append(spec.to_dict())
    branches = list(placement_branches(target, args.patch))
    lines = [json.dumps(p, sort_keys=True) for p in patches]
    return {"branches": branches, "patches": patches}, lines


def handle_tile(args):
    tiles = tile_volume(args.shape, args.patch, args.overlap)
    tiles = [t.to_dict() for t in tiles]
    return {"tiles": tiles}, [json.dumps(t, sort_keys=True) for t in tiles]


def handle_augment(args):
    image = load_volume(args.input)
    boxes = _boxes_for(args.gt, args.image_id)
    scheme = resolve_scheme(args.scheme)
    params = draw_params(scheme, args.seed)
    sample = augment_sample(Sample.from_boxes(image, boxes), params)

    os.makedirs(args.out, exist_ok=True)
    image_path = save_volume(
        sample.image, os.path.join(args.out, f"{args.image_id}_image")
    )
    mask_path = save_volume(
        sample.mask, os.path.join(args.out, f"{args.image_id}_mask")
    )
    csv_path = write_annotations(
        os.path.join(args.out, "boxes.csv"), {args.image_id: list(sample.boxes)}
    )
    params_path = os.path.join(args.out, "params.json")
    with open(params_path, "w", encoding="utf-8") as f:
        json.dump(params.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    result = {
        "image": image_path,
        "mask": mask_path,
        "annotations": csv_path,
        "params": params.to_dict(),
        "instances": len(sample.boxes),
    }
    return result, [
        f"Scheme {scheme.name}, {len(sample.boxes)} instances, wrote {args.out}"
    ]


def handle_plan_topology(args):
    kwargs = {}
    if args.heads is not None:
        kwargs["head_levels"] = args.heads
    plan = plan_topology(
        args.patch,
        base_channels=args.base_channels,
        widen_factor=args.widen,
        max_channels=args.max_channels or None,
        n_levels=args.levels,
        **kwargs,
    )
    text = plan_summary(plan)
    return json.loads(text), [text.rstrip("\n")]


def handle_detect(args):
    def run(path):
        vol = load_volume(path)
        image_id = _image_id(path)
        if args.tiled:
            return detect_tiled(
                vol,
                args.patch,
                overlap=args.overlap,
                intensity_threshold=args.threshold,
                min_voxels=args.min_voxels,
                stitch_iou=args.stitch_iou,
                image_id=image_id,
            )
        return blob_detect(vol, args.threshold, args.min_voxels, image_id)

    sets = map_in_order(run, args.inputs, args.workers)
    write_predictions(args.out, {s.image_id: list(s.boxes) for s in sets})
    counts = {s.image_id: len(s) for s in sets}
    return (
        {"output": args.out, "detections": counts},
        [f"{image_id}: {n} detections" for image_id, n in counts.items()],
    )


def handle_stitch(args):
    patches = read_patch_predictions(args.input)
    merged = {}
    for image_id, per_patch in patches.items():
        result = stitch(per_patch, args.iou, args.shape, image_id=image_id)
        merged[image_id] = list(result.boxes)
    write_predictions(args.out, merged)
    counts = {i: len(b) for i, b in merged.items()}
    return (
        {"output": args.out, "detections": counts},
        [f"{image_id}: {n} stitched boxes" for image_id, n in counts.items()],
    )


def handle_ensemble(args):
    a = read_predictions(args.a)
    b = read_predictions(args.b)
    fused = {}
    for image_id in sorted(set(a) | set(b)):
        result = ensemble_fuse(
            DetectionSet(image_id, a.get(image_id, [])),
            DetectionSet(image_id, b.get(image_id, [])),
            args.iou,
        )
        fused[image_id] = list(result.boxes)
    write_predictions(args.out, fused)
    counts = {i: len(v) for i, v in fused.items()}
    return (
        {"output": args.out, "detections": counts},
        [f"{image_id}: {n} fused boxes" for image_id, n in counts.items()],
    )


def handle_eval_froc(args):
    gt = read_annotations(args.gt)
    preds = read_predictions(args.pred)
    curve = evaluate_predictions(gt, preds, args.iou, args.fp_points)
    if args.report:
        write_report(args.report, curve)
    if args.curve:
        write_curve_tsv(args.curve, curve)
    lines = [f"FROC score at IoU {args.iou:g}: {curve.score:.4f}"]
    lines += [
        f"  {fp:g} FP/image: sensitivity {sens:.4f}"
        for fp, sens in curve.operating_points
    ]
    return froc_report(curve), lines


def handle_split_folds(args):
    if args.manifest:
        image_ids = load_manifest(args.manifest).image_ids
    else:
        image_ids = list(read_annotations(args.csv))
    folds = split_folds(image_ids, args.folds, args.seed)
    if args.out:
        write_folds(args.out, folds)
    lines = [f"fold {k}: {', '.join(fold)}" for k, fold in enumerate(folds)]
    return {"folds": folds, "assignment": fold_assignment(folds)}, lines


def handle_run(args):
    config = load_config(args.config) if args.config else PipelineConfig()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.workers is not None:
        changes["workers"] = args.workers
    if changes:
        config = attrs.evolve(config, **changes)
    report = run_pipeline(config, args.manifest, args.out)
    lines = [f"Run folder: {args.out}"]
    lines += [f"FROC @ IoU {t}: {s:.4f}" for t, s in report["scores"].items()]
    return report, lines


COMMAND_HANDLERS = {
    "phantom-gen": handle_phantom_gen,
    "preprocess": handle_preprocess,
    "pseudomask": handle_pseudomask,
    "sample-patches": handle_sample_patches,
    "tile": handle_tile,
    "augment": handle_augment,
    "plan-topology": handle_plan_topology,
    "detect": handle_detect,
    "stitch": handle_stitch,
    "ensemble": handle_ensemble,
    "eval-froc": handle_eval_froc,
    "split-folds": handle_split_folds,
    "run": handle_run,
}
