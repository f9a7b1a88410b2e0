"""Seeded cross-validation fold assignment."""

import json
import os

import numpy as np

from config.pipeline_defaults import N_FOLDS
from utilities.errors import EvaluationError


def split_folds(image_ids, n_folds=N_FOLDS, seed=0):
    """
    Shuffle ``image_ids`` with a seeded permutation and deal them round-robin.

    Returns:
        list: ``n_folds`` lists of ids; sizes differ by at most one.

    Raises:
        EvaluationError: Fewer than two folds, more folds than ids, or
            duplicate ids.
    """
    image_ids = list(image_ids)
    n_folds = int(n_folds)
    if n_folds < 2:
        raise EvaluationError(f"need at least 2 folds, got {n_folds}")
    if n_folds > len(image_ids):
        raise EvaluationError(
            f"cannot split {len(image_ids)} images into {n_folds} folds"
        )
    if len(set(image_ids)) != len(image_ids):
        raise EvaluationError("image ids must be unique")

    order = np.random.default_rng(seed).permutation(len(image_ids))
    folds = [[] for _ in range(n_folds)]
    for position, index in enumerate(order):
        folds[position % n_folds].append(image_ids[int(index)])
    return folds


def fold_assignment(folds):
    """Return ``{image_id: fold_index}``."""
    return {image_id: k for k, fold in enumerate(folds) for image_id in fold}


def write_folds(path, folds):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(fold_assignment(folds), f, indent=2, sort_keys=True)
        f.write("\n")
    return path
