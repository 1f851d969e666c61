import math
from fractions import Fraction

import numpy as np
from PIL import Image

from ..core.boxes import scale_box
from ..core.types import BinaryMask, FloatImage, GrayImage
from ..enhancement_pipeline.synthesize_channels import ThreeChannelImage

SHORT_SIDE = 800
LONG_SIDE = 1333


def model_scale(width, height, short_side=SHORT_SIDE, long_side=LONG_SIDE):
    """Exact scale: shorter side to ``short_side`` unless that pushes the longer past ``long_side``."""
    return min(Fraction(short_side, min(width, height)), Fraction(long_side, max(width, height)))


def _resize_plane(plane, size, resample):
    resized = Image.fromarray(np.asarray(plane, dtype=np.float32)).resize(size, resample=resample)
    return np.asarray(resized, dtype=np.float64)


def resize_image(img, size):
    if isinstance(img, ThreeChannelImage):
        return ThreeChannelImage(tuple(resize_image(c, size) for c in img.channels))
    if isinstance(img, BinaryMask):
        return resize_mask(img, size)
    plane = _resize_plane(img.pixels, size, Image.Resampling.BILINEAR)
    if isinstance(img, GrayImage):
        return img.with_pixels(np.clip(np.rint(plane), 0, img.max_value))
    if isinstance(img, FloatImage) and img.pixels.min() >= 0.0 and img.pixels.max() <= 1.0:
        plane = np.clip(plane, 0.0, 1.0)
    return FloatImage(plane)


def resize_mask(mask, size):
    resized = Image.fromarray(mask.bits.astype(np.uint8) * 255).resize(size, resample=Image.Resampling.NEAREST)
    return BinaryMask(np.asarray(resized) > 127)


def resize_for_model(img, boxes, short_side=SHORT_SIDE, long_side=LONG_SIDE):
    """
    Rescale ``img`` and its boxes for the detector input.

    Returns ``(img, boxes, scale)``; output dimensions are floor(side * scale)
    and ``scale`` maps resized coordinates back by division.
    """
    height, width = img.shape
    scale = model_scale(width, height, short_side, long_side)
    if scale == 1:
        return img, list(boxes), 1.0
    size = (math.floor(width * scale), math.floor(height * scale))
    resized = resize_image(img, size)
    new_boxes = [scale_box(b, float(scale), size[0], size[1]) for b in boxes]
    return resized, new_boxes, float(scale)
