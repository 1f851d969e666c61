from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.filters import gaussian_smooth, sample_bilinear, sample_nearest
from ..core.types import BinaryMask, FloatImage, GrayImage
from ..utils.errors import ParameterError
from ..utils.utils import make_rng


class ElasticParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(default=34.0, ge=0.0)
    sigma: float = Field(default=8.0, gt=0.0)
    seed: int = Field(default=0, ge=0, lt=1 << 64)


@dataclass(frozen=True)
class DisplacementField:
    dx: FloatImage
    dy: FloatImage

    def __post_init__(self):
        if self.dx.shape != self.dy.shape:
            raise ParameterError(f"Displacement planes differ in shape: {self.dx.shape} vs {self.dy.shape}.")

    @classmethod
    def zeros(cls, shape):
        return cls(FloatImage(np.zeros(shape)), FloatImage(np.zeros(shape)))

    @property
    def width(self):
        return self.dx.width

    @property
    def height(self):
        return self.dx.height

    @property
    def shape(self):
        return self.dx.shape

    def magnitude(self):
        return np.hypot(self.dx.pixels, self.dy.pixels)


def make_displacement_field(shape, params):
    """Uniform [-1, 1] noise, Gaussian-smoothed and scaled by alpha; one generator per call."""
    rng = make_rng(params.seed)
    noise_x = rng.uniform(-1.0, 1.0, size=shape)
    noise_y = rng.uniform(-1.0, 1.0, size=shape)
    dx = gaussian_smooth(noise_x, params.sigma) * params.alpha
    dy = gaussian_smooth(noise_y, params.sigma) * params.alpha
    return DisplacementField(FloatImage(dx), FloatImage(dy))


def _source_coords(field):
    ys, xs = np.mgrid[0:field.height, 0:field.width].astype(np.float64)
    return xs + field.dx.pixels, ys + field.dy.pixels


def warp_array(array, field):
    if np.shape(array) != field.shape:
        raise ParameterError(f"Cannot warp shape {np.shape(array)} with a {field.shape} field.")
    xs, ys = _source_coords(field)
    return sample_bilinear(array, xs, ys)


def warp(img, field):
    """Backward warp: out(x, y) = img(x + dx, y + dy), sampled bilinearly with clamped borders."""
    if isinstance(img, BinaryMask):
        return warp_mask(img, field)
    warped = warp_array(img.pixels, field)
    if isinstance(img, GrayImage):
        return img.with_pixels(np.clip(np.rint(warped), 0, img.max_value))
    return FloatImage(warped)


def warp_mask(mask, field):
    if mask.shape != field.shape:
        raise ParameterError(f"Cannot warp shape {mask.shape} with a {field.shape} field.")
    xs, ys = _source_coords(field)
    return BinaryMask(sample_nearest(mask.bits.astype(np.float64), xs, ys) > 0.5)
