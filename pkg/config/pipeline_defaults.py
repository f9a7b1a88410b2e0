"""Published defaults for preprocessing, patching and evaluation."""

# Resampling (z, y, x) in mm; scans within the tolerance are left untouched.
TARGET_SPACING = (1.40, 1.43, 1.43)
SPACING_TOLERANCE = 0.05

BASELINE_PATCH_SIZE = (160, 128, 128)
LARGE_PATCH_SIZE = (192, 192, 192)

# Training patch placement
OFFSET_FRACTION = 0.7

TILE_OVERLAP = 0.5
STITCH_IOU = 0.5
ENSEMBLE_IOU = 0.5

# Evaluation protocol
FP_POINTS = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
EVAL_IOU = (0.1, 0.3)
N_FOLDS = 5

# Toy detector, tuned to the phantom generator defaults
DETECTOR_THRESHOLD = 0.5
DETECTOR_MIN_VOXELS = 8

# Network topology planner
BASE_CHANNELS = 32
WIDEN_FACTOR = 1.5
MAX_CHANNELS = 384
N_LEVELS = 6
KERNEL_SIZE = 3
HEAD_LEVELS = (2, 3, 4, 5)
SEG_HEAD_LEVEL = 0

# Phantom generator
PHANTOM_SHAPE = (256, 192, 192)
PHANTOM_RADIUS_RANGE = (4.0, 16.0)
PHANTOM_INTENSITY = 1.0
PHANTOM_NOISE_SIGMA = 0.05
