import cv2
import numpy as np

from ..core.types import BinaryMask, FloatImage, GrayImage
from ..utils.errors import NoBoundaryError, ParameterError

DEFAULT_INPAINT_RADIUS = 3


def inpaint_array(values, hole, radius=DEFAULT_INPAINT_RADIUS):
    """
    Fill the ``hole`` pixels of a float raster with fast-marching inpainting.

    Pixels are filled in order of their distance to the hole boundary, each
    from the known pixels within ``radius``. Only hole pixels of the returned
    array differ from ``values``.
    """
    values = np.asarray(values, dtype=np.float64)
    hole = np.asarray(hole, dtype=bool)
    if values.shape != hole.shape:
        raise ParameterError(f"Hole shape {hole.shape} does not match image shape {values.shape}.")
    if radius < 1:
        raise ParameterError(f"Inpainting radius must be at least 1, got {radius}.")
    if not hole.any():
        return values.copy()
    if hole.all():
        raise NoBoundaryError("Hole covers the whole image, nothing to propagate from.")

    filled = cv2.inpaint(
        values.astype(np.float32),
        hole.astype(np.uint8),
        float(radius),
        cv2.INPAINT_TELEA,
    )
    out = values.copy()
    out[hole] = filled[hole]
    return out


def inpaint_fmm(img, hole, radius=DEFAULT_INPAINT_RADIUS):
    if isinstance(hole, BinaryMask):
        hole = hole.bits
    out = inpaint_array(img.pixels, hole, radius)
    if isinstance(img, GrayImage):
        return img.with_pixels(np.clip(np.rint(out), 0, img.max_value))
    return FloatImage(out)
