"""Per-image detection sets."""

from attrs import evolve, field, frozen

from boxes.box import BoxF
from utilities.errors import DetectionError


def _scored_boxes(values):
    boxes = tuple(values)
    for box in boxes:
        if box.score is None:
            raise DetectionError("every detection needs a score")
    return boxes


@frozen
class DetectionSet:
    """Scored boxes predicted for one image."""

    image_id: str = field(converter=str)
    boxes: tuple = field(default=(), converter=_scored_boxes)

    def __len__(self):
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def sorted(self):
        """Canonical order: score descending, then lexicographic corners."""
        return evolve(self, boxes=sorted(self.boxes, key=BoxF.sort_key))

    def with_boxes(self, boxes):
        return evolve(self, boxes=boxes)
