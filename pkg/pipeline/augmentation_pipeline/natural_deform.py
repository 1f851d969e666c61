"""
Natural deformation of a lesion (or any local breast region).

The target region and the rest of the image are warped by one shared elastic
field. The warped region is pasted into the untouched original; pixels the
region vacated are taken from the warped background, and the seam along the
new region boundary is repaired by inpainting. Work happens on a padded
window around the target so only that window is ever touched.
"""

import math
from dataclasses import dataclass

import numpy as np
from datasets.fingerprint import Hasher

from ..core.boxes import tight_box
from ..core.filters import dilate, outer_boundary
from ..core.types import BBox, BinaryMask, FloatImage, GrayImage
from ..utils.errors import DeformationOutOfBoundsError, ParameterError
from .elastic import make_displacement_field, warp_array, warp_mask
from .inpaint import DEFAULT_INPAINT_RADIUS, inpaint_array

NON_MASS_RADIUS_RANGE = (16, 64)


@dataclass(frozen=True)
class AugmentSample:
    """An image with one mask per mass; ``boxes[k]`` is always the tight box of ``lesion_masks[k]``."""

    image: object
    lesion_masks: tuple = ()
    boxes: tuple = ()

    def __post_init__(self):
        masks, boxes = tuple(self.lesion_masks), tuple(self.boxes)
        if len(masks) != len(boxes):
            raise ParameterError(f"{len(masks)} lesion masks but {len(boxes)} boxes.")
        for mask, box in zip(masks, boxes):
            if mask.shape != self.image.shape:
                raise ParameterError(f"Lesion mask shape {mask.shape} differs from image {self.image.shape}.")
            if tight_box(mask) != box:
                raise ParameterError(f"Box {box.as_tuple()} is not the tight box of its mask.")
        object.__setattr__(self, "lesion_masks", masks)
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def from_masks(cls, image, masks):
        masks = tuple(masks)
        return cls(image, masks, tuple(tight_box(m) for m in masks))

    @property
    def shape(self):
        return self.image.shape


class NaturalDeform:
    CONFIG_HASH = Hasher.hash(
        ["shared-field", "normalized-warp", "paste-into-original", "residual-from-warped-background", "seam-inpaint"]
    )

    def __init__(self, inpaint_radius=DEFAULT_INPAINT_RADIUS):
        self.inpaint_radius = inpaint_radius

    def __call__(self, sample, target_mask, params):
        return natural_deform(sample, target_mask, params, self.inpaint_radius)


def deform_window(shape, target_box, alpha, inpaint_radius):
    """Padded window around ``target_box`` that contains every pixel a deformation can touch."""
    height, width = shape
    pad = math.ceil(alpha) + inpaint_radius + 1
    return BBox(
        max(target_box.x_min - pad, 0),
        max(target_box.y_min - pad, 0),
        min(target_box.x_max + pad, width),
        min(target_box.y_max + pad, height),
    )


def _warp_part(values, part, field, fallback):
    """Normalized bilinear warp of the ``part`` pixels; samples never mix in pixels outside ``part``."""
    weight = warp_array(part.astype(np.float64), field)
    total = warp_array(np.where(part, values, 0.0), field)
    covered = weight > 1e-9
    out = fallback.copy()
    out[covered] = total[covered] / weight[covered]
    return out


def natural_deform(sample, target_mask, params, inpaint_radius=DEFAULT_INPAINT_RADIUS):
    if target_mask.shape != sample.shape:
        raise ParameterError(f"Target mask shape {target_mask.shape} differs from image {sample.shape}.")
    if not target_mask.any():
        raise ParameterError("Target mask is empty.")

    window = deform_window(sample.shape, tight_box(target_mask), params.alpha, inpaint_radius)
    rows = slice(window.y_min, window.y_max)
    cols = slice(window.x_min, window.x_max)

    values = sample.image.pixels[rows, cols].astype(np.float64)
    region_mask = target_mask.bits[rows, cols]
    field = make_displacement_field(values.shape, params)

    # Steps 1-2: region and background warped by one field, each from its own pixels only
    warped_full = warp_array(values, field)
    warped_region = _warp_part(values, region_mask, field, warped_full)
    warped_background = _warp_part(values, ~region_mask, field, warped_full)
    warped_mask = warp_mask(BinaryMask(region_mask), field).bits
    if not warped_mask.any():
        raise DeformationOutOfBoundsError("The deformed region left the image.")

    # Step 3: paste into the original background
    out = values.copy()
    out[warped_mask] = warped_region[warped_mask]
    residual = region_mask & ~warped_mask

    # Step 4: vacated pixels come from the deformed background
    out[residual] = warped_background[residual]

    # Step 5: repair the seam on the vacated side of the new boundary
    seam = dilate(outer_boundary(BinaryMask(warped_mask)), inpaint_radius).bits & residual
    out = inpaint_array(out, seam, inpaint_radius)

    changed = region_mask | warped_mask
    pixels = np.array(sample.image.pixels, copy=True)
    if isinstance(sample.image, GrayImage):
        patch = np.clip(np.rint(out), 0, sample.image.max_value).astype(pixels.dtype)
    else:
        patch = out
    pixels[rows, cols][changed] = patch[changed]
    image = sample.image.with_pixels(pixels) if isinstance(sample.image, GrayImage) else FloatImage(pixels)

    masks = list(sample.lesion_masks)
    for k, mask in enumerate(masks):
        if mask == target_mask:
            full = np.zeros(sample.shape, dtype=bool)
            full[rows, cols] = warped_mask
            masks[k] = BinaryMask(full)
    return AugmentSample.from_masks(image, masks)


def random_breast_regions(breast_mask, lesion_masks, count, rng, radius_range=NON_MASS_RADIUS_RANGE, max_tries=100):
    """
    Draw up to ``count`` disc-shaped breast regions that overlap no lesion.

    Each disc has an integer radius uniform in ``radius_range`` and is centred
    on a breast pixel; the region is the disc clipped to the breast mask.
    """
    candidates = np.flatnonzero(breast_mask.bits.ravel())
    if count <= 0 or candidates.size == 0:
        return []
    lesions = np.zeros(breast_mask.shape, dtype=bool)
    for mask in lesion_masks:
        lesions |= mask.bits

    height, width = breast_mask.shape
    ys, xs = np.ogrid[0:height, 0:width]
    regions = []
    for _ in range(max_tries):
        if len(regions) == count:
            break
        centre = int(candidates[rng.integers(candidates.size)])
        cy, cx = divmod(centre, width)
        radius = int(rng.integers(radius_range[0], radius_range[1] + 1))
        disc = ((ys - cy) ** 2 + (xs - cx) ** 2 <= radius * radius) & breast_mask.bits
        if (disc & lesions).any():
            continue
        regions.append(BinaryMask(disc))
    return regions
