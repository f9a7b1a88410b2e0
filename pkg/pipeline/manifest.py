"""
Dataset manifests.

A manifest lists the MVOL volumes of a dataset and its annotation CSV::

    annotations: gt.csv
    volumes:
      - image_id: case_000
        path: volumes/case_000.json

Relative paths are resolved against the manifest's folder. JSON and YAML
manifests are both accepted.
"""

import json
import os

import yaml
from attrs import field, frozen

from utilities.errors import ConfigError


@frozen
class ManifestEntry:
    image_id: str = field(converter=str)
    path: str = field(converter=str)


def _entries(values):
    entries = tuple(
        v if isinstance(v, ManifestEntry) else ManifestEntry(**v)
        for v in values
    )
    ids = [e.image_id for e in entries]
    if len(set(ids)) != len(ids):
        raise ConfigError("manifest lists an image id twice")
    return entries


@frozen
class Manifest:
    volumes: tuple = field(converter=_entries)
    annotations: str = None

    @property
    def image_ids(self):
        return [e.image_id for e in self.volumes]

    def to_dict(self, base=None):
        def rel(path):
            return os.path.relpath(path, base) if base else path

        data = {
            "volumes": [
                {"image_id": e.image_id, "path": rel(e.path)}
                for e in self.volumes
            ]
        }
        if self.annotations is not None:
            data["annotations"] = rel(self.annotations)
        return data


def load_manifest(path):
    """
    Read a manifest and resolve its paths.

    Raises:
        ConfigError: Missing file, unparsable content or missing fields.
    """
    if not os.path.exists(path):
        raise ConfigError(f"manifest not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            if path.lower().endswith((".yaml", ".yml")):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot parse manifest {path}: {e}")
    if not isinstance(data, dict) or "volumes" not in data:
        raise ConfigError(f"manifest {path} lacks a 'volumes' list")

    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    try:
        volumes = [
            ManifestEntry(v["image_id"], resolve(v["path"]))
            for v in data["volumes"]
        ]
    except (KeyError, TypeError) as e:
        raise ConfigError(f"manifest volume entry lacks field {e}")
    annotations = data.get("annotations")
    return Manifest(
        volumes=volumes,
        annotations=None if annotations is None else resolve(annotations),
    )


def write_manifest(path, manifest):
    """Write ``manifest`` as JSON with paths relative to its folder."""
    base = os.path.dirname(os.path.abspath(path))
    os.makedirs(base, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest.to_dict(base), f, indent=2, sort_keys=True)
        f.write("\n")
    return path
