from fractions import Fraction

import numpy as np
import pytest

from pipeline.core.boxes import iou, scale_box, tight_box
from pipeline.core.filters import (
    bilinear_sample,
    dilate,
    gaussian_kernel,
    gaussian_smooth,
    largest_connected_component,
    otsu_bin,
    otsu_threshold,
    outer_boundary,
)
from pipeline.core.io import read_image, read_mask, read_pgm, write_image, write_mask
from pipeline.core.types import BBox, BinaryMask, GrayImage
from pipeline.utils.errors import DegenerateHistogramError, EmptyMaskError, ParameterError


def exhaustive_otsu(hist):
    n = sum(hist)
    s = sum(i * h for i, h in enumerate(hist))
    best_t, best = None, Fraction(-1)
    n0 = s0 = 0
    for t in range(len(hist) - 1):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = n - n0
        if n0 == 0 or n1 == 0:
            continue
        mu0 = Fraction(s0, n0)
        mu1 = Fraction(s - s0, n1)
        variance = Fraction(n0 * n1, n * n) * (mu0 - mu1) ** 2
        if variance > best:
            best_t, best = t, variance
    return best_t


def test_gaussian_kernel():
    kernel = gaussian_kernel(2.0)
    assert kernel.size == 2 * 6 + 1
    assert kernel.sum() == pytest.approx(1.0)
    assert np.allclose(kernel, kernel[::-1])
    with pytest.raises(ParameterError):
        gaussian_kernel(0.0)


def test_gaussian_smooth_keeps_constants():
    smoothed = gaussian_smooth(np.full((20, 30), 7.0), 3.0)
    assert np.allclose(smoothed, 7.0)


def test_otsu_matches_exhaustive_search():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        hist = rng.integers(0, 50, size=256)
        hist[rng.random(256) < 0.5] = 0
        if np.count_nonzero(hist) < 2:
            hist[0], hist[255] = 1, 1
        hist = [int(h) for h in hist]
        assert otsu_bin(hist) == exhaustive_otsu(hist)


def test_otsu_threshold_separates_two_levels():
    pixels = np.full((10, 10), 10)
    pixels[:, 5:] = 200
    t = otsu_threshold(GrayImage(pixels, 8))
    assert 10 <= t < 200


def test_otsu_on_constant_image():
    with pytest.raises(DegenerateHistogramError):
        otsu_threshold(GrayImage(np.full((8, 8), 3), 8))


def test_largest_component_is_eight_connected():
    bits = np.zeros((10, 10), dtype=bool)
    bits[0, 0] = bits[1, 1] = bits[2, 2] = True
    bits[6:8, 6:8] = True
    bits[9, 0] = True
    component = largest_connected_component(BinaryMask(bits))
    assert component.area == 4
    assert component.bits[6, 6]

    bits[3, 3] = True
    component = largest_connected_component(BinaryMask(bits))
    assert component.area == 4
    assert component.bits[0, 0]


def test_largest_component_of_empty_mask():
    with pytest.raises(EmptyMaskError):
        largest_connected_component(BinaryMask.empty((4, 4)))


def test_dilate_and_boundaries():
    bits = np.zeros((7, 7), dtype=bool)
    bits[3, 3] = True
    assert dilate(BinaryMask(bits), 1).area == 5
    assert dilate(BinaryMask(bits), 0) == BinaryMask(bits)

    square = np.zeros((7, 7), dtype=bool)
    square[2:5, 2:5] = True
    assert outer_boundary(BinaryMask(square)).area == 12
    with pytest.raises(ParameterError):
        dilate(BinaryMask(square), -1)


def test_bilinear_sample():
    img = GrayImage(np.array([[0, 10], [20, 30]]), 8)
    assert bilinear_sample(img, 0.5, 0.5) == pytest.approx(15.0)
    assert bilinear_sample(img, 1.0, 0.0) == pytest.approx(10.0)
    assert bilinear_sample(img, -3.0, -3.0) == pytest.approx(0.0)
    assert bilinear_sample(img, 5.0, 5.0) == pytest.approx(30.0)


def test_iou():
    a = BBox(0, 0, 2, 2)
    assert iou(a, a) == 1.0
    assert iou(a, BBox(1, 0, 3, 2)) == pytest.approx(1 / 3)
    assert iou(a, BBox(2, 0, 4, 2)) == 0.0


def test_bbox_rejects_empty_and_fractional_boxes():
    with pytest.raises(ParameterError):
        BBox(0, 0, 0, 1)
    with pytest.raises(ParameterError):
        BBox(0, 0, 1.5, 2)


def test_tight_box():
    bits = np.zeros((10, 12), dtype=bool)
    bits[2:5, 3:9] = True
    assert tight_box(BinaryMask(bits)) == BBox(3, 2, 9, 5)
    with pytest.raises(EmptyMaskError):
        tight_box(BinaryMask.empty((3, 3)))


def test_scale_box():
    assert scale_box(BBox(10, 20, 30, 40), 2.0) == BBox(20, 40, 60, 80)
    assert scale_box(BBox(10, 20, 30, 40), 2.0, width=50, height=70) == BBox(20, 40, 50, 70)
    assert scale_box(BBox(0, 0, 1, 1), 0.1) == BBox(0, 0, 1, 1)


def test_pgm_16bit_roundtrip(tmp_path):
    pixels = np.arange(12 * 7).reshape(7, 12) * 700
    img = GrayImage(pixels, 16)
    path = write_image(tmp_path / "scan.pgm", img)
    restored = read_image(path)
    assert restored.bit_depth == 16
    assert np.array_equal(restored.pixels, img.pixels)


def test_pgm_header_comments(tmp_path):
    path = tmp_path / "commented.pgm"
    path.write_bytes(b"P5\n# scanner note\n3 2\n255\n" + bytes([1, 2, 3, 4, 5, 6]))
    img = read_pgm(path)
    assert img.shape == (2, 3)
    assert img.pixels.tolist() == [[1, 2, 3], [4, 5, 6]]


def test_png_and_mask_roundtrip(tmp_path):
    img = GrayImage(np.arange(100).reshape(10, 10) * 600, 16)
    assert np.array_equal(read_image(write_image(tmp_path / "a.png", img)).pixels, img.pixels)

    bits = np.zeros((5, 6), dtype=bool)
    bits[1:3, 2:5] = True
    assert read_mask(write_mask(tmp_path / "m.png", BinaryMask(bits))) == BinaryMask(bits)


def test_unsupported_format(tmp_path):
    with pytest.raises(ParameterError):
        read_image(tmp_path / "scan.tif")
