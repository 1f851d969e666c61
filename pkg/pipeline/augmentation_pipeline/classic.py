import math

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field
from scipy import ndimage

from ..core.boxes import tight_box
from ..core.types import BinaryMask, GrayImage
from .natural_deform import AugmentSample


class ClassicAugmentConfig(BaseModel):
    """One concrete draw of the traditional augmentations. Angles in degrees, translations as fractions of the side."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rotation: float = 0.0
    translate_x: float = Field(default=0.0, gt=-1.0, lt=1.0)
    translate_y: float = Field(default=0.0, gt=-1.0, lt=1.0)
    shear: float = Field(default=0.0, gt=-45.0, lt=45.0)
    scale: float = Field(default=1.0, gt=0.0)
    hflip: bool = False
    vflip: bool = False
    seed: int = Field(default=0, ge=0, lt=1 << 64)

    def is_identity(self):
        return (
            self.rotation == 0.0
            and self.translate_x == 0.0
            and self.translate_y == 0.0
            and self.shear == 0.0
            and self.scale == 1.0
            and not self.hflip
            and not self.vflip
        )


class ClassicAugmentRanges(BaseModel):
    """Sampling ranges for :class:`ClassicAugmentConfig`; defaults are the published ones."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rotation: tuple[float, float] = (-0.1, 0.1)
    translation: tuple[float, float] = (0.0, 0.1)
    shear: tuple[float, float] = (-0.1, 0.1)
    scale: tuple[float, float] = (0.9, 1.1)
    hflip_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    vflip_probability: float = Field(default=0.5, ge=0.0, le=1.0)

    def sample(self, rng, seed=0):
        # translation magnitude in the range, direction picked per axis
        signs = rng.choice([-1.0, 1.0], size=2)
        return ClassicAugmentConfig(
            rotation=float(rng.uniform(*self.rotation)),
            translate_x=float(signs[0] * rng.uniform(*self.translation)),
            translate_y=float(signs[1] * rng.uniform(*self.translation)),
            shear=float(rng.uniform(*self.shear)),
            scale=float(rng.uniform(*self.scale)),
            hflip=bool(rng.random() < self.hflip_probability),
            vflip=bool(rng.random() < self.vflip_probability),
            seed=seed,
        )


def forward_matrix(cfg):
    """2x2 forward map in (x, y): flips after rotation, shear and scale."""
    theta = math.radians(cfg.rotation)
    rotation = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    shear = np.array([[1.0, math.tan(math.radians(cfg.shear))], [0.0, 1.0]])
    flips = np.diag([-1.0 if cfg.hflip else 1.0, -1.0 if cfg.vflip else 1.0])
    return flips @ rotation @ shear * cfg.scale


def _backward_transform(cfg, shape):
    height, width = shape
    centre = np.array([(width - 1) / 2.0, (height - 1) / 2.0])
    shift = np.array([cfg.translate_x * width, cfg.translate_y * height])
    inverse = np.linalg.inv(forward_matrix(cfg))
    # source = inverse @ (target - centre - shift) + centre, rewritten in (row, col) order
    offset_xy = centre - inverse @ (centre + shift)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    return swap @ inverse @ swap, offset_xy[::-1]


def _transform(array, cfg, order):
    matrix, offset = _backward_transform(cfg, array.shape)
    return ndimage.affine_transform(
        np.asarray(array, dtype=np.float64),
        matrix,
        offset=offset,
        output_shape=array.shape,
        order=order,
        mode="constant",
        cval=0.0,
    )


def transform_image(img, cfg):
    out = _transform(img.pixels, cfg, order=1)
    if isinstance(img, GrayImage):
        return img.with_pixels(np.clip(np.rint(out), 0, img.max_value))
    return type(img)(out)


def transform_mask(mask, cfg):
    return BinaryMask(_transform(mask.bits.astype(np.float64), cfg, order=0) > 0.5)


def classic_augment(sample, cfg):
    """Affine transform plus flips about the image centre; boxes are re-derived from the moved masks."""
    if cfg.is_identity():
        return sample
    image = transform_image(sample.image, cfg)
    masks = []
    for k, mask in enumerate(sample.lesion_masks):
        moved = transform_mask(mask, cfg)
        if not moved.any():
            logger.warning(f"Lesion {k} left the frame under {cfg.model_dump()}; dropping it.")
            continue
        masks.append(moved)
    return AugmentSample(image, tuple(masks), tuple(tight_box(m) for m in masks))
