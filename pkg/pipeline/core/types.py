from dataclasses import dataclass

import numpy as np

from ..utils.errors import ParameterError


def _frozen(array):
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Single-channel integer raster, row-major, with an explicit bit depth."""

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        if self.bit_depth not in (8, 16):
            raise ParameterError(f"Unsupported bit depth {self.bit_depth}.")
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.size == 0:
            raise ParameterError(f"GrayImage needs a non-empty 2-D array, got shape {pixels.shape}.")
        if pixels.size and (pixels.min() < 0 or pixels.max() > self.max_value):
            raise ParameterError(f"Intensities must lie in [0, {self.max_value}].")
        dtype = np.uint8 if self.bit_depth == 8 else np.uint16
        object.__setattr__(self, "pixels", _frozen(pixels.astype(dtype, copy=False)))

    @property
    def max_value(self):
        return (1 << self.bit_depth) - 1

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape

    def crop(self, box):
        return GrayImage(self.pixels[box.y_min:box.y_max, box.x_min:box.x_max], self.bit_depth)

    def with_pixels(self, pixels):
        return GrayImage(pixels, self.bit_depth)


@dataclass(frozen=True, eq=False)
class FloatImage:
    """Single-channel real raster: normalized intensities or displacement components."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.ndim != 2 or pixels.size == 0:
            raise ParameterError(f"FloatImage needs a non-empty 2-D array, got shape {pixels.shape}.")
        object.__setattr__(self, "pixels", _frozen(pixels))

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape


@dataclass(frozen=True, eq=False)
class BinaryMask:
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2:
            raise ParameterError(f"BinaryMask needs a 2-D array, got shape {bits.shape}.")
        object.__setattr__(self, "bits", _frozen(bits.astype(bool, copy=False)))

    @classmethod
    def empty(cls, shape):
        return cls(np.zeros(shape, dtype=bool))

    @property
    def width(self):
        return self.bits.shape[1]

    @property
    def height(self):
        return self.bits.shape[0]

    @property
    def shape(self):
        return self.bits.shape

    @property
    def area(self):
        return int(self.bits.sum())

    def any(self):
        return bool(self.bits.any())

    def __or__(self, other):
        return BinaryMask(self.bits | other.bits)

    def __and__(self, other):
        return BinaryMask(self.bits & other.bits)

    def __sub__(self, other):
        return BinaryMask(self.bits & ~other.bits)

    def __eq__(self, other):
        return isinstance(other, BinaryMask) and self.shape == other.shape and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.shape, self.bits.tobytes()))

    def crop(self, box):
        return BinaryMask(self.bits[box.y_min:box.y_max, box.x_min:box.x_max])


@dataclass(frozen=True, order=True)
class BBox:
    """Axis-aligned box, half-open on the max edges."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        for name in ("x_min", "y_min", "x_max", "y_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ParameterError(f"Box coordinate {name}={value!r} is not an integer.")
            object.__setattr__(self, name, int(value))
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ParameterError(f"Box {self.as_tuple()} has no area.")

    @property
    def width(self):
        return self.x_max - self.x_min

    @property
    def height(self):
        return self.y_max - self.y_min

    @property
    def area(self):
        return self.width * self.height

    def as_tuple(self):
        return (self.x_min, self.y_min, self.x_max, self.y_max)

    def translate(self, dx, dy):
        return BBox(self.x_min + dx, self.y_min + dy, self.x_max + dx, self.y_max + dy)

    def to_dict(self):
        return {"x_min": self.x_min, "y_min": self.y_min, "x_max": self.x_max, "y_max": self.y_max}

    @classmethod
    def from_dict(cls, d):
        return cls(d["x_min"], d["y_min"], d["x_max"], d["y_max"])
