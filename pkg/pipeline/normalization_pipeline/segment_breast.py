from dataclasses import dataclass

import numpy as np
from datasets.fingerprint import Hasher
from loguru import logger

from ..core.boxes import tight_box
from ..core.filters import gaussian_filter, largest_connected_component, otsu_threshold
from ..core.types import BBox, BinaryMask, GrayImage
from ..utils.errors import DegenerateHistogramError, EmptyMaskError, SegmentationError

DEFAULT_SIGMA = 2.0
MAX_REFINEMENTS = 8


@dataclass(frozen=True)
class BreastRoi:
    """Breast bounding rectangle cropped out of a mammogram."""

    image: GrayImage
    mask: BinaryMask
    origin: tuple

    @property
    def box(self):
        """The crop rectangle in the coordinates of the original image."""
        x, y = self.origin
        return BBox(x, y, x + self.image.width, y + self.image.height)

    def to_crop(self, box):
        """Translate a box from original-image to crop coordinates, clipped to the crop."""
        x, y = self.origin
        shifted = box.translate(-x, -y)
        x_min, y_min = max(shifted.x_min, 0), max(shifted.y_min, 0)
        x_max, y_max = min(shifted.x_max, self.image.width), min(shifted.y_max, self.image.height)
        if x_min >= x_max or y_min >= y_max:
            return None
        return BBox(x_min, y_min, x_max, y_max)

    def full_mask(self, shape):
        """Breast mask embedded back into a raster of the original ``shape``."""
        bits = np.zeros(shape, dtype=bool)
        box = self.box
        bits[box.y_min:box.y_max, box.x_min:box.x_max] = self.mask.bits
        return BinaryMask(bits)


class SegmentBreast:
    CONFIG_HASH = Hasher.hash(["gaussian", "otsu-256", "largest-8-connected", "masked-refinement", "tight-crop"])

    def __init__(self, sigma=DEFAULT_SIGMA):
        self.sigma = sigma

    def __call__(self, img):
        return segment_breast(img, self.sigma)


def _breast_component(img, sigma):
    smoothed = gaussian_filter(img, sigma)
    try:
        threshold = otsu_threshold(smoothed)
    except DegenerateHistogramError as e:
        raise SegmentationError(f"Cannot segment a constant image: {e}") from e

    foreground = BinaryMask(smoothed.pixels > threshold)
    try:
        return largest_connected_component(foreground)
    except EmptyMaskError as e:
        raise SegmentationError("Thresholding left no foreground.") from e


def segment_breast(img, sigma=DEFAULT_SIGMA, max_refinements=MAX_REFINEMENTS):
    """
    Crop the breast: Gaussian smoothing, Otsu threshold, largest 8-connected component.

    The component is then re-segmented from the image with its background
    zeroed until the mask stops changing, so feeding a masked result back in
    returns the same mask.
    """
    breast = _breast_component(img, sigma)
    for _ in range(max_refinements):
        refined = _breast_component(img.with_pixels(np.where(breast.bits, img.pixels, 0)), sigma)
        if refined == breast:
            break
        breast = refined
    else:
        logger.debug(f"Breast mask still changing after {max_refinements} refinements.")

    box = tight_box(breast)
    return BreastRoi(image=img.crop(box), mask=breast.crop(box), origin=(box.x_min, box.y_min))
