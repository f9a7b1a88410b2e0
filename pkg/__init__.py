"""
Volumetric lesion detection toolkit.

Resampling, pseudo masks, patch sampling, augmentation, loss functions,
topology planning, detection, stitching, ensembling and FROC evaluation,
driven from a single command line.
"""
