from .types import BBox, BinaryMask, FloatImage, GrayImage
from .boxes import iou, scale_box, tight_box
from .filters import (
    bilinear_sample,
    dilate,
    gaussian_filter,
    largest_connected_component,
    otsu_threshold,
)

__all__ = [
    "BBox",
    "BinaryMask",
    "FloatImage",
    "GrayImage",
    "bilinear_sample",
    "dilate",
    "gaussian_filter",
    "iou",
    "largest_connected_component",
    "otsu_threshold",
    "scale_box",
    "tight_box",
]
