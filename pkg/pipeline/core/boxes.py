import math

import numpy as np

from .types import BBox
from ..utils.errors import EmptyMaskError


def iou(a, b):
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def tight_box(mask):
    """Smallest half-open box covering every foreground pixel of ``mask``."""
    rows = np.flatnonzero(mask.bits.any(axis=1))
    cols = np.flatnonzero(mask.bits.any(axis=0))
    if rows.size == 0:
        raise EmptyMaskError("Cannot box an empty mask.")
    return BBox(int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1)


def scale_box(box, scale, width=None, height=None):
    """Scale box corners by ``scale`` (round half up), clamped to the raster and kept non-empty."""

    def edge(v, limit):
        v = math.floor(v * scale + 0.5)
        return v if limit is None else min(max(v, 0), limit)

    x_min, x_max = edge(box.x_min, width), edge(box.x_max, width)
    y_min, y_max = edge(box.y_min, height), edge(box.y_max, height)
    if x_max <= x_min:
        x_max = x_min + 1
        if width is not None and x_max > width:
            x_min, x_max = width - 1, width
    if y_max <= y_min:
        y_max = y_min + 1
        if height is not None and y_max > height:
            y_min, y_max = height - 1, height
    return BBox(x_min, y_min, x_max, y_max)
