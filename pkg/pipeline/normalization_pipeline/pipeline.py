from dataclasses import dataclass
from pathlib import Path

from datasets.fingerprint import Hasher
from loguru import logger

from ..core.io import read_image, write_float_png, write_image, write_mask
from ..core.types import FloatImage
from ..utils.utils import dump_json
from .segment_breast import DEFAULT_SIGMA, BreastRoi, SegmentBreast
from .truncation import TruncationNormalize, TruncationParams, rescale, truncation_percentiles


@dataclass(frozen=True)
class NormalizedRoi:
    roi: BreastRoi
    p_min: int
    p_max: int
    image: FloatImage

    def describe(self):
        return {
            "origin": list(self.roi.origin),
            "width": self.roi.image.width,
            "height": self.roi.image.height,
            "breast_area": self.roi.mask.area,
            "p_min": self.p_min,
            "p_max": self.p_max,
        }


class NormalizationPipeline:
    """Breast segmentation followed by truncation normalization of the crop."""

    def __init__(self, sigma=DEFAULT_SIGMA, params=None):
        self.segment = SegmentBreast(sigma)
        self.normalize = TruncationNormalize(params or TruncationParams())

    def run(self, img):
        roi = self.segment(img)
        p_min, p_max = truncation_percentiles(roi, self.normalize.params)
        return NormalizedRoi(roi, p_min, p_max, rescale(roi.image.pixels, p_min, p_max))

    @property
    def version(self):
        return Hasher.hash(
            [
                SegmentBreast.CONFIG_HASH,
                TruncationNormalize.CONFIG_HASH,
                self.segment.sigma,
                self.normalize.params.model_dump(),
            ]
        )


def _mask_path(path):
    path = Path(path)
    return path.with_name(f"{path.stem}_mask.png")


def segment_command(args, config):
    img = read_image(args.input)
    roi = SegmentBreast(config.sigma)(img)
    write_image(args.output, roi.image)
    write_mask(_mask_path(args.output), roi.mask)
    logger.info(f"Breast ROI at {roi.origin} ({roi.image.width}x{roi.image.height}), {roi.mask.area} breast pixels.")
    print(dump_json({"origin": list(roi.origin), "width": roi.image.width, "height": roi.image.height, "breast_area": roi.mask.area}), end="")
    return 0


def normalize_command(args, config):
    img = read_image(args.input)
    result = NormalizationPipeline(config.sigma, config.truncation).run(img)
    write_float_png(args.output, result.image)
    write_mask(_mask_path(args.output), result.roi.mask)
    logger.info(f"Truncated breast intensities to [{result.p_min}, {result.p_max}].")
    print(dump_json(result.describe()), end="")
    return 0
