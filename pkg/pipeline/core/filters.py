import math

import numpy as np
from scipy import ndimage

from .types import BinaryMask
from ..utils.errors import DegenerateHistogramError, EmptyMaskError, ParameterError

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)
OTSU_BINS = 256


def gaussian_kernel(sigma):
    if not sigma > 0:
        raise ParameterError(f"Gaussian sigma must be positive, got {sigma}.")
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_smooth(array, sigma):
    # Separable, kernel truncated at ceil(3 sigma), edge pixels replicated
    kernel = gaussian_kernel(sigma)
    out = ndimage.correlate1d(np.asarray(array, dtype=np.float64), kernel, axis=0, mode="nearest")
    return ndimage.correlate1d(out, kernel, axis=1, mode="nearest")


def gaussian_filter(img, sigma):
    smoothed = gaussian_smooth(img.pixels, sigma)
    return img.with_pixels(np.clip(np.rint(smoothed), 0, img.max_value))


def intensity_histogram(img):
    """256-bin histogram of ``img``; 16-bit images are quantized by their top 8 bits."""
    shift = img.bit_depth - 8
    bins = img.pixels.astype(np.int64) >> shift
    return np.bincount(bins.ravel(), minlength=OTSU_BINS)


def otsu_bin(hist):
    """
    Bin index t maximizing the between-class variance of ``hist`` (class 0 is bins <= t).

    The comparison runs on exact integers: for class sizes n0, n1 and intensity
    sums s0, s the variance is proportional to (s0*n - s*n0)^2 / (n0*n1), so no
    two thresholds are ever ordered by rounding noise. Ties go to the smallest t.
    """
    hist = [int(h) for h in hist]
    if sum(1 for h in hist if h) < 2:
        raise DegenerateHistogramError("Histogram needs at least two distinct intensities.")

    n = sum(hist)
    s = sum(i * h for i, h in enumerate(hist))

    best_t, best_num, best_den = 0, 0, 1
    n0 = s0 = 0
    for t in range(len(hist) - 1):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = n - n0
        if n0 == 0 or n1 == 0:
            continue
        num = (s0 * n - s * n0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def otsu_threshold(img):
    """Intensity t such that pixels > t are foreground."""
    t = otsu_bin(intensity_histogram(img))
    shift = img.bit_depth - 8
    return ((t + 1) << shift) - 1


def largest_connected_component(mask):
    labels, count = ndimage.label(mask.bits, structure=EIGHT_CONNECTED)
    if count == 0:
        raise EmptyMaskError("Mask has no foreground pixels.")
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    # labels follow raster order of each component's first pixel, argmax keeps the first
    return BinaryMask(labels == int(np.argmax(sizes)))


def disc(radius):
    r = int(radius)
    y, x = np.mgrid[-r:r + 1, -r:r + 1]
    return (x * x + y * y) <= r * r


def dilate(mask, radius):
    if radius < 0:
        raise ParameterError(f"Dilation radius must be non-negative, got {radius}.")
    if radius == 0 or not mask.any():
        return BinaryMask(mask.bits.copy())
    return BinaryMask(ndimage.binary_dilation(mask.bits, structure=disc(radius)))


def outer_boundary(mask):
    """Background pixels 4-adjacent to the mask."""
    grown = ndimage.binary_dilation(mask.bits, structure=ndimage.generate_binary_structure(2, 1))
    return BinaryMask(grown & ~mask.bits)


def sample_bilinear(array, xs, ys):
    """Vectorized bilinear sampling; coordinates outside the raster clamp to the border."""
    array = np.asarray(array, dtype=np.float64)
    height, width = array.shape
    xs = np.clip(np.asarray(xs, dtype=np.float64), 0.0, width - 1)
    ys = np.clip(np.asarray(ys, dtype=np.float64), 0.0, height - 1)
    coords = np.stack([ys.ravel(), xs.ravel()])
    values = ndimage.map_coordinates(array, coords, order=1, mode="nearest")
    return values.reshape(xs.shape)


def sample_nearest(array, xs, ys):
    array = np.asarray(array)
    height, width = array.shape
    cols = np.clip(np.floor(np.asarray(xs, dtype=np.float64) + 0.5), 0, width - 1).astype(np.intp)
    rows = np.clip(np.floor(np.asarray(ys, dtype=np.float64) + 0.5), 0, height - 1).astype(np.intp)
    return array[rows, cols]


def bilinear_sample(img, x, y):
    return float(sample_bilinear(img.pixels, np.array([x]), np.array([y]))[0])
