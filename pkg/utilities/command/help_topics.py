"""
Extended help topics for the toolkit subcommands.

The texts are shown as the epilog of each subcommand's ``--help``.
"""

DETAILED_HELP = {
    "phantom-gen": """
Phantom Dataset Usage:
---------------------
Writes synthetic volumes with ellipsoidal lesions, a ground-truth CSV and a
manifest that the 'run' command can consume.

Examples:
  phantom-gen --out data/phantoms --count 20 --seed 7
  phantom-gen --out data/small --count 2 --shape 64,64,64 --max-lesions 2
""",
    "preprocess": """
Preprocess Usage:
----------------
Resamples a volume to the target spacing unless every axis is already within
the relative tolerance. Annotation boxes can be rescaled alongside.

Examples:
  preprocess --in scan.json --out scan_1mm.json
  preprocess --in scan --out out/scan --spacing 1.4,1.43,1.43 --tolerance 0.05
""",
    "pseudomask": """
Pseudo Mask Usage:
-----------------
Draws the ellipsoid inscribed in each annotation box of one image into a label
volume. Instance k is the k-th box of the image in the CSV.
""",
    "sample-patches": """
Patch Sampling Usage:
--------------------
Prints one JSON line per drawn training patch for the given target box.
Axes where the object fits in 70% of the patch keep it fully inside the
patch; other axes centre the patch on a random point of the object.

Example:
  sample-patches --shape 256,192,192 --box 10,10,10,74,74,74 -n 5
""",
    "tile": """
Tiling Usage:
------------
Prints the sliding-window tiles of a volume as JSON lines.

Example:
  tile --shape 256,192,192 --patch 192,192,192 --overlap 0.5
""",
    "augment": """
Augment Usage:
-------------
Applies one random draw of scheme A or B (or a scheme file) to an image and
its annotation boxes. Writes the augmented image, its mask and a box CSV.
""",
    "plan-topology": """
Topology Planner Usage:
----------------------
Prints the per-level sizes and channels of the detection network as JSON.

Example:
  plan-topology --patch 192,192,192
""",
    "detect": """
Detect Usage:
------------
Runs the threshold detector on whole volumes, or tile by tile with --tiled,
and writes a prediction CSV.
""",
    "stitch": """
Stitch Usage:
------------
Merges patch-local predictions (CSV with patch_z, patch_y, patch_x origin
columns) into global predictions with NMS. Boxes are clipped to the volume
given by --shape; boxes entirely outside it are dropped.

Example:
  stitch --in patches.csv --out predictions.csv --shape 256,192,192
""",
    "ensemble": """
Ensemble Usage:
--------------
Fuses two prediction CSVs image by image. Boxes found by only one model keep
half of their score.
""",
    "eval-froc": """
FROC Evaluation Usage:
---------------------
Scores predictions against ground truth. The FROC score is the mean
sensitivity at the given false positives per image.

Example:
  eval-froc --gt gt.csv --pred pred.csv --iou 0.3 --curve curve.tsv
""",
    "split-folds": """
Fold Split Usage:
----------------
Deals image ids from a manifest or CSV into seeded cross-validation folds.
""",
    "run": """
Pipeline Usage:
--------------
Executes preprocess, pseudo masks, optional augmentation preview, tiled
detection, optional ensemble and FROC evaluation into a run folder.

Example:
  run --manifest data/phantoms/manifest.json --out runs/base --config run.yaml
""",
}


def get_extended_help(topic):
    """Get extended help for a specific topic."""
    return DETAILED_HELP.get(topic.lower(), None)
