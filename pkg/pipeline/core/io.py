"""
Raster persistence.

PGM (P5) is read and written directly; 16-bit samples are big-endian as the
netpbm format requires. PNG goes through Pillow. Masks are 8-bit images with
0 for background and 255 for foreground.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from .types import BinaryMask, FloatImage, GrayImage
from ..utils.errors import ParameterError

PNG_FLOAT_SCALE = 65535


def _pgm_tokens(data):
    # Header is four whitespace-separated tokens; '#' comments run to end of line
    tokens, i = [], 0
    while len(tokens) < 4:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < len(data) and not data[i:i + 1].isspace():
            i += 1
        if start == i:
            raise ParameterError("Truncated PGM header.")
        tokens.append(data[start:i])
    # exactly one whitespace byte separates the header from the raster
    return tokens, i + 1


def read_pgm(path):
    data = Path(path).read_bytes()
    (magic, width, height, max_value), offset = _pgm_tokens(data)
    if magic != b"P5":
        raise ParameterError(f"{path}: only binary greyscale PGM (P5) is supported.")
    width, height, max_value = int(width), int(height), int(max_value)
    dtype = np.dtype(">u2") if max_value > 255 else np.dtype("u1")
    count = width * height
    raster = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
    return GrayImage(raster.reshape(height, width).astype(np.uint16), 16 if max_value > 255 else 8)


def write_pgm(path, img):
    dtype = np.dtype(">u2") if img.bit_depth == 16 else np.dtype("u1")
    header = f"P5\n{img.width} {img.height}\n{img.max_value}\n".encode("ascii")
    Path(path).write_bytes(header + img.pixels.astype(dtype).tobytes())


def read_png(path):
    with Image.open(path) as image:
        if image.mode in ("I;16", "I;16B", "I;16L", "I"):
            array = np.array(image).astype(np.int64)
            return GrayImage(np.clip(array, 0, 65535), 16)
        if image.mode != "L":
            image = image.convert("L")
        return GrayImage(np.array(image), 8)


def write_png(path, img):
    dtype = np.uint16 if img.bit_depth == 16 else np.uint8
    Image.fromarray(np.ascontiguousarray(img.pixels.astype(dtype))).save(path, format="PNG")


def read_image(path):
    suffix = Path(path).suffix.lower()
    if suffix in (".pgm", ".pnm"):
        return read_pgm(path)
    if suffix == ".png":
        return read_png(path)
    raise ParameterError(f"{path}: unsupported image format '{suffix}'.")


def write_image(path, img):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() in (".pgm", ".pnm"):
        write_pgm(path, img)
    elif path.suffix.lower() == ".png":
        write_png(path, img)
    else:
        raise ParameterError(f"{path}: unsupported image format '{path.suffix}'.")
    return path


def read_mask(path):
    return BinaryMask(read_image(path).pixels > 0)


def write_mask(path, mask):
    return write_image(path, GrayImage(np.where(mask.bits, 255, 0), 8))


def float_to_gray16(img):
    return GrayImage(np.rint(np.clip(img.pixels, 0.0, 1.0) * PNG_FLOAT_SCALE), 16)


def gray_to_float(img):
    return FloatImage(img.pixels.astype(np.float64) / img.max_value)


def write_float_png(path, img):
    """Persist a [0,1] raster as 16-bit PNG via round(v * 65535)."""
    return write_image(path, float_to_gray16(img))


def read_float_png(path):
    return gray_to_float(read_image(path))


def write_rgb_png(path, planes):
    """Write three [0,1] planes as an 8-bit RGB PNG in the given channel order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    stacked = np.stack([np.rint(np.clip(p, 0.0, 1.0) * 255) for p in planes], axis=-1).astype(np.uint8)
    Image.fromarray(stacked).save(path, format="PNG")
    return path


def read_rgb_png(path):
    with Image.open(path) as image:
        array = np.array(image.convert("RGB")).astype(np.float64) / 255.0
    return [array[..., c] for c in range(3)]


def read_planes(path):
    """Integer planes of an image: one for greyscale files, three for RGB PNGs."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        with Image.open(path) as image:
            if image.mode in ("RGB", "RGBA", "P"):
                array = np.array(image.convert("RGB"))
                return [GrayImage(array[..., c], 8) for c in range(3)]
    return [read_image(path)]


def write_planes(path, planes):
    if len(planes) == 1:
        return write_image(path, planes[0])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    stacked = np.stack([p.pixels.astype(np.uint8) for p in planes], axis=-1)
    Image.fromarray(stacked).save(path, format="PNG")
    return path
