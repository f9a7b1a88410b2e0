"""A training sample: image, instance mask and one box per instance."""

from attrs import field, frozen

from boxes.pseudo_mask import ellipsoid_mask, relabel_instances


def _boxes(values):
    return tuple(values)


@frozen(eq=False)
class Sample:
    """
    Image, label mask and boxes that travel through augmentation together.

    Box ``k - 1`` is the tight bounding box of mask instance ``k``.
    """

    image: object
    mask: object
    boxes: tuple = field(converter=_boxes)

    def __attrs_post_init__(self):
        if self.image.is_label or not self.mask.is_label:
            raise ValueError("sample needs an image volume and a label mask")
        if self.image.shape != self.mask.shape:
            raise ValueError(
                f"image {self.image.shape} and mask {self.mask.shape} differ"
            )

    @classmethod
    def from_boxes(cls, image, boxes):
        """
        Build a sample from box annotations via ellipsoid pseudo masks.

        Boxes are re-derived from the mask so the sample invariant holds;
        boxes that cover no voxel centre are dropped.
        """
        mask = ellipsoid_mask(boxes, image.shape, image.spacing, image.origin)
        data, derived = relabel_instances(mask.data)
        return cls(image, mask.with_data(data), derived)
