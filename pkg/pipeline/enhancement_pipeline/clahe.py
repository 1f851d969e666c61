"""
Contrast-limited adaptive histogram equalization on [0,1] rasters.

The image is cut into a tiles_y x tiles_x grid of contextual regions. Each
region's histogram is clipped at clip_limit * region_size counts, the clipped
excess is spread evenly over all bins in one pass, and the cumulative
histogram becomes that region's intensity mapping. Output pixels blend the
mappings of the (up to) four nearest region centres bilinearly; pixels
beyond the outermost centres fall back to two or one mapping.
"""

import numpy as np
from datasets.fingerprint import Hasher
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..core.types import FloatImage
from ..utils.errors import ParameterError


class ClaheConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tiles_x: int = Field(default=8, ge=1)
    tiles_y: int = Field(default=8, ge=1)
    clip_limit: float = Field(default=0.01, gt=0.0, le=1.0)
    bins: int = Field(default=256, ge=2)


class Clahe:
    CONFIG_HASH = Hasher.hash(["clip-fraction-of-tile", "single-pass-redistribution", "bilinear-tile-centres"])

    def __init__(self, cfg=None):
        self.cfg = cfg or ClaheConfig()

    def __call__(self, img):
        return clahe(img, self.cfg)


def tile_edges(length, tiles):
    return (np.arange(tiles + 1) * length) // tiles


def _tile_mapping(bins_in_tile, cfg):
    size = bins_in_tile.size
    hist = np.bincount(bins_in_tile.ravel(), minlength=cfg.bins).astype(np.float64)
    # at least one count per bin survives clipping
    limit = max(1.0, cfg.clip_limit * size)
    excess = np.maximum(hist - limit, 0.0).sum()
    clipped = np.minimum(hist, limit) + excess / cfg.bins
    return np.cumsum(clipped) / size


def _axis_weights(length, edges):
    centres = (edges[:-1] + edges[1:] - 1) / 2.0
    pos = np.arange(length, dtype=np.float64)
    upper = np.searchsorted(centres, pos, side="right")
    i0 = np.clip(upper - 1, 0, centres.size - 1)
    i1 = np.clip(upper, 0, centres.size - 1)
    span = centres[i1] - centres[i0]
    weight = np.where(span > 0, (pos - centres[i0]) / np.where(span > 0, span, 1.0), 0.0)
    return i0, i1, weight


def clahe(img, cfg):
    pixels = np.clip(img.pixels, 0.0, 1.0)
    height, width = pixels.shape
    if height < cfg.tiles_y or width < cfg.tiles_x:
        raise ParameterError(
            f"Image {width}x{height} is smaller than the {cfg.tiles_x}x{cfg.tiles_y} tile grid."
        )

    bin_index = np.minimum((pixels * cfg.bins).astype(np.int64), cfg.bins - 1)
    ys, xs = tile_edges(height, cfg.tiles_y), tile_edges(width, cfg.tiles_x)
    smallest_tile = int(np.diff(ys).min() * np.diff(xs).min())
    if cfg.clip_limit * smallest_tile < 1.0:
        logger.warning(
            f"Clip limit {cfg.clip_limit} is below one count on {smallest_tile}-pixel tiles; clipping at 1 count."
        )

    mappings = np.empty((cfg.tiles_y, cfg.tiles_x, cfg.bins), dtype=np.float64)
    for i in range(cfg.tiles_y):
        for j in range(cfg.tiles_x):
            tile = bin_index[ys[i]:ys[i + 1], xs[j]:xs[j + 1]]
            mappings[i, j] = _tile_mapping(tile, cfg)

    r0, r1, wy = _axis_weights(height, ys)
    c0, c1, wx = _axis_weights(width, xs)
    r0, r1, wy = r0[:, None], r1[:, None], wy[:, None]
    c0, c1, wx = c0[None, :], c1[None, :], wx[None, :]

    top = (1.0 - wx) * mappings[r0, c0, bin_index] + wx * mappings[r0, c1, bin_index]
    bottom = (1.0 - wx) * mappings[r1, c0, bin_index] + wx * mappings[r1, c1, bin_index]
    return FloatImage(np.clip((1.0 - wy) * top + wy * bottom, 0.0, 1.0))
