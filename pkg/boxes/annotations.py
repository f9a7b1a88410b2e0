"""
Annotation and prediction CSV files.

Annotations: ``image_id,min_z,min_y,min_x,max_z,max_y,max_x`` in voxel
coordinates of the (possibly resampled) volume. Predictions add a ``score``
column. Patch predictions used by the ``stitch`` command add the patch origin
``patch_z,patch_y,patch_x`` and hold boxes in patch-local coordinates.

Converting world (mm) coordinates into voxel coordinates is the job of
whoever ingests a dataset; these files are voxel based only.
"""

import csv
import logging
import os
from collections import OrderedDict

from boxes.box import BoxF
from utilities.core.shared_utils import format_float
from utilities.errors import AnnotationFormatError

logger = logging.getLogger(__name__)

BOX_COLUMNS = ["min_z", "min_y", "min_x", "max_z", "max_y", "max_x"]
ANNOTATION_COLUMNS = ["image_id"] + BOX_COLUMNS
PREDICTION_COLUMNS = ANNOTATION_COLUMNS + ["score"]
ORIGIN_COLUMNS = ["patch_z", "patch_y", "patch_x"]
PATCH_COLUMNS = ["image_id"] + ORIGIN_COLUMNS + BOX_COLUMNS + ["score"]


def _read_rows(path, required):
    if not os.path.exists(path):
        raise FileNotFoundError(f"CSV file not found: {path}")
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise AnnotationFormatError(
                f"{path} lacks columns: {', '.join(missing)}"
            )
        return list(reader)


def _row_box(row, with_score, path, line):
    try:
        values = [float(row[c]) for c in BOX_COLUMNS]
        score = float(row["score"]) if with_score else None
        return BoxF.from_array(values, score=score)
    except (ValueError, TypeError) as e:
        raise AnnotationFormatError(f"{path}:{line}: invalid box row: {e}")


def read_annotations(path):
    """Return ``{image_id: [BoxF, ...]}`` in file order."""
    result = OrderedDict()
    for line, row in enumerate(_read_rows(path, ANNOTATION_COLUMNS), start=2):
        box = _row_box(row, False, path, line)
        result.setdefault(row["image_id"], []).append(box)
    logger.debug(f"Read {sum(map(len, result.values()))} boxes from {path}")
    return result


def read_predictions(path):
    """Return ``{image_id: [BoxF with score, ...]}`` in file order."""
    result = OrderedDict()
    for line, row in enumerate(_read_rows(path, PREDICTION_COLUMNS), start=2):
        box = _row_box(row, True, path, line)
        result.setdefault(row["image_id"], []).append(box)
    return result


def read_patch_predictions(path):
    """
    Return ``{image_id: [(patch_origin, [BoxF, ...]), ...]}``.

    Boxes stay in patch-local coordinates; patches keep their first
    appearance order.
    """
    grouped = OrderedDict()
    for line, row in enumerate(_read_rows(path, PATCH_COLUMNS), start=2):
        try:
            origin = tuple(int(row[c]) for c in ORIGIN_COLUMNS)
        except ValueError as e:
            raise AnnotationFormatError(
                f"{path}:{line}: invalid patch origin: {e}"
            )
        box = _row_box(row, True, path, line)
        per_image = grouped.setdefault(row["image_id"], OrderedDict())
        per_image.setdefault(origin, []).append(box)
    return OrderedDict(
        (image_id, list(patches.items()))
        for image_id, patches in grouped.items()
    )


def _box_cells(box):
    return [format_float(v) for v in box.min + box.max]


def _write_rows(path, header, rows):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_annotations(path, boxes_by_image):
    """Write ``{image_id: [BoxF]}`` sorted by image id, boxes in list order."""
    rows = []
    for image_id in sorted(boxes_by_image):
        for box in boxes_by_image[image_id]:
            rows.append([image_id] + _box_cells(box))
    _write_rows(path, ANNOTATION_COLUMNS, rows)
    return path


def write_predictions(path, boxes_by_image):
    """Write scored boxes sorted by image id, then canonical box order."""
    rows = []
    for image_id in sorted(boxes_by_image):
        for box in sorted(boxes_by_image[image_id], key=BoxF.sort_key):
            rows.append(
                [image_id] + _box_cells(box) + [format_float(box.score)]
            )
    _write_rows(path, PREDICTION_COLUMNS, rows)
    return path


def write_patch_predictions(path, patches_by_image):
    """Write ``{image_id: [(origin, [BoxF])]}`` in the patch-local format."""
    rows = []
    for image_id in sorted(patches_by_image):
        for origin, boxes in patches_by_image[image_id]:
            for box in sorted(boxes, key=BoxF.sort_key):
                rows.append(
                    [image_id]
                    + [str(int(o)) for o in origin]
                    + _box_cells(box)
                    + [format_float(box.score)]
                )
    _write_rows(path, PATCH_COLUMNS, rows)
    return path
