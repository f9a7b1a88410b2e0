"""JSON and TSV renderings of FROC results."""

import json
import os


def froc_report(curve):
    """Plain dictionary form of a :class:`FrocCurve`."""
    return {
        "score": curve.score,
        "iou_threshold": curve.iou_threshold,
        "n_images": curve.n_images,
        "n_gt": curve.n_gt,
        "points": [
            {"threshold": t, "fp_per_image": fp, "sensitivity": s}
            for t, fp, s in curve.points
        ],
        "operating_points": [
            {"fp_per_image": fp, "sensitivity": s}
            for fp, s in curve.operating_points
        ],
        "per_image": [dict(stats) for stats in curve.per_image],
    }


def _ensure_folder(path):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)


def write_json(path, data):
    """Write ``data`` as sorted-key JSON with a trailing newline."""
    _ensure_folder(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_report(path, curve):
    return write_json(path, froc_report(curve))


def write_curve_tsv(path, curve):
    """One row per threshold: ``threshold, fp_per_image, sensitivity``."""
    _ensure_folder(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write("threshold\tfp_per_image\tsensitivity\n")
        for threshold, fp, sens in curve.points:
            f.write(f"{threshold!r}\t{fp!r}\t{sens!r}\n")
    return path
