"""
MVOL volume files.

An MVOL volume is a pair of files sharing a base name:

* ``<name>.json``: header with ``shape``, ``spacing``, ``origin`` (all z, y, x),
  ``dtype`` (``f32``, ``u8`` or ``u16``), ``kind`` (``image`` or ``label``),
  ``byte_order`` (always ``little``) and ``axis_order``.
* ``<name>.raw``: the voxels, little-endian, x fastest-varying and z slowest.

Saving then loading reproduces the geometry exactly and the payload
bit-for-bit.
"""

import json
import logging
import os

import numpy as np

from utilities.errors import VolumeFormatError
from volumes.volume import Volume

logger = logging.getLogger(__name__)

DTYPES = {"f32": np.dtype("<f4"), "u8": np.dtype("u1"), "u16": np.dtype("<u2")}
AXIS_ORDER = ["z", "y", "x"]
HEADER_FIELDS = ("shape", "spacing", "origin", "dtype", "kind")


def mvol_paths(path):
    """Return ``(header_path, payload_path)`` for a base name or either file."""
    path = os.fspath(path)
    base, ext = os.path.splitext(path)
    if ext.lower() not in (".json", ".raw", ".mvol"):
        base = path
    return base + ".json", base + ".raw"


def _dtype_code(vol):
    if vol.kind == "image":
        return "f32"
    return "u8" if vol.data.dtype == np.uint8 else "u16"


def save_volume(vol, path):
    """
    Write ``vol`` as an MVOL pair.

    Parameters:
        vol (Volume): Volume to store.
        path (str): Base name, or the name of either file of the pair.

    Returns:
        str: The header path that was written.
    """
    header_path, payload_path = mvol_paths(path)
    folder = os.path.dirname(header_path)
    if folder:
        os.makedirs(folder, exist_ok=True)

    code = _dtype_code(vol)
    header = {
        "shape": list(vol.shape),
        "spacing": list(vol.spacing),
        "origin": list(vol.origin),
        "dtype": code,
        "kind": vol.kind,
        "byte_order": "little",
        "axis_order": AXIS_ORDER,
    }
    payload = np.ascontiguousarray(vol.data, dtype=DTYPES[code])
    with open(payload_path, "wb") as f:
        f.write(payload.tobytes(order="C"))
    with open(header_path, "w", encoding="utf-8") as f:
        json.dump(header, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug(f"Saved {vol.kind} volume {vol.shape} to {header_path}")
    return header_path


def _read_header(header_path):
    if not os.path.exists(header_path):
        raise VolumeFormatError(f"MVOL header not found: {header_path}")
    try:
        with open(header_path, "r", encoding="utf-8") as f:
            header = json.load(f)
    except (OSError, ValueError) as e:
        raise VolumeFormatError(f"Corrupt MVOL header {header_path}: {e}")
    if not isinstance(header, dict):
        raise VolumeFormatError(f"MVOL header {header_path} is not an object")

    missing = [name for name in HEADER_FIELDS if name not in header]
    if missing:
        raise VolumeFormatError(
            f"MVOL header {header_path} lacks fields: {', '.join(missing)}"
        )
    if header["dtype"] not in DTYPES:
        raise VolumeFormatError(f"Unknown MVOL dtype: {header['dtype']!r}")
    if header.get("byte_order", "little") != "little":
        raise VolumeFormatError(
            f"Unsupported byte order: {header.get('byte_order')!r}"
        )
    if header.get("axis_order", AXIS_ORDER) != AXIS_ORDER:
        raise VolumeFormatError(
            f"Unsupported axis order: {header.get('axis_order')!r}"
        )
    return header


def load_volume(path):
    """
    Read an MVOL pair into a :class:`Volume`.

    Raises:
        VolumeFormatError: Missing or corrupt header, unknown dtype, or a
            payload whose length does not match the declared shape.
    """
    header_path, payload_path = mvol_paths(path)
    header = _read_header(header_path)

    try:
        shape = tuple(int(s) for s in header["shape"])
    except (TypeError, ValueError):
        raise VolumeFormatError(f"Invalid shape in {header_path}")
    if len(shape) != 3 or min(shape) <= 0:
        raise VolumeFormatError(f"Invalid shape {shape} in {header_path}")

    dtype = DTYPES[header["dtype"]]
    if not os.path.exists(payload_path):
        raise VolumeFormatError(f"MVOL payload not found: {payload_path}")
    with open(payload_path, "rb") as f:
        raw = f.read()

    expected = int(np.prod(shape)) * dtype.itemsize
    if len(raw) != expected:
        raise VolumeFormatError(
            f"Payload length mismatch in {payload_path}: expected "
            f"{expected // dtype.itemsize} values for shape {list(shape)}, "
            f"found {len(raw) / dtype.itemsize:g}"
        )

    data = np.frombuffer(raw, dtype=dtype).reshape(shape)
    try:
        return Volume(
            data=data,
            spacing=header["spacing"],
            origin=header["origin"],
            kind=header["kind"],
        )
    except ValueError as e:
        raise VolumeFormatError(f"Invalid MVOL volume {header_path}: {e}")
