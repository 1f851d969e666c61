import math
from fractions import Fraction

import numpy as np
from datasets.fingerprint import Hasher
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.types import FloatImage
from ..utils.errors import DegenerateRangeError, EmptyMaskError


class TruncationParams(BaseModel):
    """Fractions of the darkest and brightest breast pixels clamped away before rescaling."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    low_fraction: float = Field(default=0.05, ge=0.0, lt=1.0)
    high_fraction: float = Field(default=0.01, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check_sum(self):
        if self.low_fraction + self.high_fraction >= 1.0:
            raise ValueError("low_fraction + high_fraction must be below 1.")
        return self


# min-max rescaling of the breast, used when truncation is switched off
NO_TRUNCATION = TruncationParams(low_fraction=0.0, high_fraction=0.0)


class TruncationNormalize:
    CONFIG_HASH = Hasher.hash(["nearest-rank", "breast-pixels-only", "clamp-then-rescale"])

    def __init__(self, params=None):
        self.params = params or TruncationParams()

    def __call__(self, roi):
        return truncate_normalize(roi, self.params)


def _rank_indices(n, params):
    # exact decimal fractions so 0.01 * 100 lands on 1 rather than 1.0000000000000002
    low = Fraction(repr(params.low_fraction))
    high = Fraction(repr(params.high_fraction))
    lo = math.floor(low * n)
    hi = math.ceil((1 - high) * n) - 1
    return min(max(lo, 0), n - 1), min(max(hi, 0), n - 1)


def truncation_percentiles(roi, params):
    """
    Nearest-rank (P_min, P_max) over the breast pixels of ``roi``.

    With the n breast intensities sorted ascending, P_min sits at index
    floor(low * n) and P_max at index ceil((1 - high) * n) - 1, so no more than
    low * n + 1 pixels fall at or below P_min and no more than high * n + 1 at
    or above P_max when intensities are distinct.
    """
    values = np.sort(roi.image.pixels[roi.mask.bits], kind="stable")
    n = values.size
    if n == 0:
        raise EmptyMaskError("Breast mask selects no pixels.")
    lo, hi = _rank_indices(n, params)
    p_min, p_max = int(values[lo]), int(values[hi])
    if p_min >= p_max:
        raise DegenerateRangeError(f"Breast intensities collapse to a single level ({p_min}).")
    return p_min, p_max


def truncate_normalize(roi, params):
    p_min, p_max = truncation_percentiles(roi, params)
    return rescale(roi.image.pixels, p_min, p_max)


def rescale(pixels, p_min, p_max):
    clamped = np.clip(pixels.astype(np.float64), p_min, p_max)
    return FloatImage((clamped - p_min) / (p_max - p_min))
