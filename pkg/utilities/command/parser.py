"""
Command line parsing.

Builds the argparse front end with one subcommand per toolkit operation and
provides the small value parsers it needs (``192,192,192`` style vectors).
"""

import argparse
import logging

from config.pipeline_defaults import (
    BASE_CHANNELS,
    DETECTOR_MIN_VOXELS,
    DETECTOR_THRESHOLD,
    ENSEMBLE_IOU,
    FP_POINTS,
    LARGE_PATCH_SIZE,
    MAX_CHANNELS,
    N_FOLDS,
    N_LEVELS,
    PHANTOM_INTENSITY,
    PHANTOM_NOISE_SIGMA,
    PHANTOM_RADIUS_RANGE,
    PHANTOM_SHAPE,
    SPACING_TOLERANCE,
    STITCH_IOU,
    TARGET_SPACING,
    TILE_OVERLAP,
    WIDEN_FACTOR,
)
from utilities.command.help_topics import get_extended_help

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def parse_numbers(text, count=None, integer=False):
    """
    Parse ``"1,2,3"`` into a tuple of numbers.

    Raises:
        argparse.ArgumentTypeError: Wrong count or a non-numeric part.
    """
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if count is not None and len(parts) != count:
        raise argparse.ArgumentTypeError(
            f"expected {count} comma separated values, got '{text}'"
        )
    try:
        if integer:
            return tuple(int(p) for p in parts)
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a list of numbers")


def triple(text):
    return parse_numbers(text, 3)


def int_triple(text):
    return parse_numbers(text, 3, integer=True)


def box6(text):
    return parse_numbers(text, 6)


def number_list(text):
    return parse_numbers(text)


def _fmt(values):
    return ",".join(f"{v:g}" for v in values)


def _add(subparsers, name, summary):
    return subparsers.add_parser(
        name,
        help=summary,
        description=summary,
        epilog=get_extended_help(name),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )


def build_parser():
    """Return the toolkit's argument parser."""
    parser = argparse.ArgumentParser(
        prog="lesion-toolkit",
        description="Volumetric lesion detection toolkit",
    )
    parser.add_argument(
        "--log-level",
        choices=LOG_LEVELS,
        default="WARNING",
        help="Set the logging level (default: WARNING)",
    )
    parser.add_argument(
        "--log-file",
        default=None,
        help="Log file path; an empty value disables file logging",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="Print a machine readable JSON result on stdout",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = _add(sub, "phantom-gen", "Generate a synthetic phantom dataset")
    p.add_argument("--out", required=True, help="Output folder")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--shape", type=int_triple, default=PHANTOM_SHAPE)
    p.add_argument("--spacing", type=triple, default=TARGET_SPACING)
    p.add_argument("--max-lesions", type=int, default=3)
    p.add_argument(
        "--radius-range",
        type=lambda t: parse_numbers(t, 2),
        default=PHANTOM_RADIUS_RANGE,
        help="Lesion radius range in voxels "
        f"(default: {_fmt(PHANTOM_RADIUS_RANGE)})",
    )
    p.add_argument("--intensity", type=float, default=PHANTOM_INTENSITY)
    p.add_argument("--noise", type=float, default=PHANTOM_NOISE_SIGMA)
    p.add_argument("--seed", type=int, default=0)

    p = _add(sub, "preprocess", "Resample a volume to the target spacing")
    p.add_argument("--in", dest="input", required=True, help="MVOL volume")
    p.add_argument("--out", required=True, help="Output MVOL base name")
    p.add_argument("--spacing", type=triple, default=TARGET_SPACING)
    p.add_argument("--tolerance", type=float, default=SPACING_TOLERANCE)
    p.add_argument("--gt", help="Annotation CSV to rescale alongside")
    p.add_argument("--gt-out", help="Rescaled annotation CSV")
    p.add_argument("--image-id", help="Only rescale rows of this image")

    p = _add(sub, "pseudomask", "Build an ellipsoid pseudo mask from boxes")
    p.add_argument("--in", dest="input", required=True, help="Reference volume")
    p.add_argument("--gt", required=True, help="Annotation CSV")
    p.add_argument("--image-id", required=True)
    p.add_argument("--out", required=True, help="Output MVOL base name")

    p = _add(sub, "sample-patches", "Draw training patch placements")
    p.add_argument("--shape", type=int_triple, required=True)
    p.add_argument("--box", type=box6, required=True, help="min_z,..,max_x")
    p.add_argument("--patch", type=int_triple, default=LARGE_PATCH_SIZE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-n", "--count", type=int, default=1)

    p = _add(sub, "tile", "List sliding-window tiles of a volume")
    p.add_argument("--shape", type=int_triple, required=True)
    p.add_argument("--patch", type=int_triple, default=LARGE_PATCH_SIZE)
    p.add_argument("--overlap", type=float, default=TILE_OVERLAP)

    p = _add(sub, "augment", "Augment an image and its boxes")
    p.add_argument("--in", dest="input", required=True, help="Image volume")
    p.add_argument("--gt", required=True, help="Annotation CSV")
    p.add_argument("--image-id", required=True)
    p.add_argument("--scheme", default="A", help="A, B or a scheme file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="Output folder")

    p = _add(sub, "plan-topology", "Plan the detection network topology")
    p.add_argument("--patch", type=int_triple, default=LARGE_PATCH_SIZE)
    p.add_argument("--base-channels", type=int, default=BASE_CHANNELS)
    p.add_argument("--widen", type=float, default=WIDEN_FACTOR)
    p.add_argument(
        "--max-channels",
        type=int,
        default=MAX_CHANNELS,
        help="0 disables the cap",
    )
    p.add_argument("--levels", type=int, default=N_LEVELS)
    p.add_argument(
        "--heads",
        type=lambda t: parse_numbers(t, integer=True),
        default=None,
        help="Levels carrying detection heads",
    )

    p = _add(sub, "detect", "Run the threshold detector")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--out", required=True, help="Prediction CSV")
    p.add_argument("--threshold", type=float, default=DETECTOR_THRESHOLD)
    p.add_argument("--min-voxels", type=int, default=DETECTOR_MIN_VOXELS)
    p.add_argument("--tiled", action="store_true")
    p.add_argument("--patch", type=int_triple, default=LARGE_PATCH_SIZE)
    p.add_argument("--overlap", type=float, default=TILE_OVERLAP)
    p.add_argument("--stitch-iou", type=float, default=STITCH_IOU)
    p.add_argument("--workers", type=int, default=None)

    p = _add(sub, "stitch", "Merge patch-local predictions")
    p.add_argument("--in", dest="input", required=True, help="Patch CSV")
    p.add_argument("--out", required=True, help="Prediction CSV")
    p.add_argument("--iou", type=float, default=STITCH_IOU)
    p.add_argument(
        "--shape",
        type=int_triple,
        required=True,
        help="Volume shape; stitched boxes are clipped to it",
    )

    p = _add(sub, "ensemble", "Fuse two prediction files")
    p.add_argument("--a", required=True, help="Predictions of model A")
    p.add_argument("--b", required=True, help="Predictions of model B")
    p.add_argument("--out", required=True)
    p.add_argument("--iou", type=float, default=ENSEMBLE_IOU)

    p = _add(sub, "eval-froc", "Compute the FROC score")
    p.add_argument("--gt", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--iou", type=float, default=0.3)
    p.add_argument("--fp-points", type=number_list, default=FP_POINTS)
    p.add_argument("--report", help="Write the JSON report here")
    p.add_argument("--curve", help="Write the curve TSV here")

    p = _add(sub, "split-folds", "Assign images to cross-validation folds")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--manifest")
    source.add_argument("--csv", help="Take image ids from an annotation CSV")
    p.add_argument("--folds", type=int, default=N_FOLDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="Write {image_id: fold} JSON here")

    p = _add(sub, "run", "Run the full pipeline")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="Run folder")
    p.add_argument("--config", help="YAML or JSON run configuration")
    p.add_argument("--seed", type=int, help="Override the configured seed")
    p.add_argument("--workers", type=int, help="Override the worker count")

    return parser
