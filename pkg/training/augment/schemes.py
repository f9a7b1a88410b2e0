"""
Augmentation scheme tables as typed objects.

The raw tables live in :mod:`config.augmentation_schemes`. Entries without a
table magnitude pick up the default range from
:mod:`config.intensity_defaults`, so every entry a scheme carries can be
overridden through a JSON or YAML file.
"""

import json
import logging
import os

import yaml
from attrs import field, frozen

from config.augmentation_schemes import AUGMENTATION_SCHEMES, TRANSFORM_ORDER
from config.intensity_defaults import INTENSITY_MAGNITUDES
from utilities.errors import ConfigError, UnknownSchemeError
from utilities.validators import validate_enum, validate_probability

logger = logging.getLogger(__name__)

_validate_transform = validate_enum("transform", TRANSFORM_ORDER)


def _magnitude(value):
    if value is None:
        return None
    low, high = (float(v) for v in value)
    if low > high:
        raise ValueError(f"magnitude range is reversed: [{low}, {high}]")
    return (low, high)


@frozen
class AugEntry:
    transform_id: str = field(validator=lambda _, __, v: _validate_transform(v))
    probability: float = field(
        converter=lambda v: validate_probability("probability", v)
    )
    magnitude: tuple = field(default=None, converter=_magnitude)

    def to_dict(self):
        magnitude = None if self.magnitude is None else list(self.magnitude)
        return {
            "transform": self.transform_id,
            "p": self.probability,
            "m": magnitude,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["transform"], data["p"], data.get("m"))
        except KeyError as e:
            raise ConfigError(f"augmentation entry lacks field {e}")


def _entries(values):
    return tuple(
        v if isinstance(v, AugEntry) else AugEntry(*v) for v in values
    )


@frozen
class AugScheme:
    """An ordered list of transforms with inclusion probabilities."""

    name: str
    entries: tuple = field(converter=_entries)

    def __attrs_post_init__(self):
        seen = [e.transform_id for e in self.entries]
        if len(set(seen)) != len(seen):
            raise ValueError(f"scheme {self.name} lists a transform twice")

    def entry(self, transform_id):
        """Return the entry for ``transform_id`` or ``None`` if absent."""
        for e in self.entries:
            if e.transform_id == transform_id:
                return e
        return None

    def to_dict(self):
        entries = [e.to_dict() for e in self.entries]
        return {"name": self.name, "entries": entries}

    @classmethod
    def from_dict(cls, data):
        if "entries" not in data:
            raise ConfigError("augmentation scheme lacks 'entries'")
        return cls(
            str(data.get("name", "custom")),
            [AugEntry.from_dict(e) for e in data["entries"]],
        )


def scheme_table(name):
    """
    Return the built-in scheme ``name`` (``"A"`` or ``"B"``).

    Raises:
        UnknownSchemeError: ``name`` is not a built-in scheme.
    """
    if name not in AUGMENTATION_SCHEMES:
        raise UnknownSchemeError(
            f"unknown augmentation scheme '{name}' "
            f"(known: {', '.join(sorted(AUGMENTATION_SCHEMES))})"
        )
    entries = []
    for transform_id, probability, magnitude in AUGMENTATION_SCHEMES[name]:
        if magnitude is None:
            magnitude = INTENSITY_MAGNITUDES.get(transform_id)
        entries.append(AugEntry(transform_id, probability, magnitude))
    return AugScheme(name, entries)


def load_scheme(path):
    """Read a scheme from a ``.json``, ``.yaml`` or ``.yml`` file."""
    with open(path, "r", encoding="utf-8") as f:
        if os.path.splitext(path)[1].lower() in (".yaml", ".yml"):
            data = yaml.safe_load(f)
        else:
            data = json.load(f)
    if not isinstance(data, dict):
        raise ConfigError(f"{path} does not hold an augmentation scheme")
    scheme = AugScheme.from_dict(data)
    logger.info(f"Loaded augmentation scheme '{scheme.name}' from {path}")
    return scheme


def save_scheme(scheme, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(scheme.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def resolve_scheme(name_or_path):
    """A built-in scheme name or a path to a scheme file."""
    if name_or_path in AUGMENTATION_SCHEMES:
        return scheme_table(name_or_path)
    if os.path.exists(name_or_path):
        return load_scheme(name_or_path)
    return scheme_table(name_or_path)
