from .pipeline import NormalizationPipeline, NormalizedRoi
from .segment_breast import BreastRoi, segment_breast
from .truncation import NO_TRUNCATION, TruncationParams, truncate_normalize, truncation_percentiles

__all__ = [
    "BreastRoi",
    "NO_TRUNCATION",
    "NormalizationPipeline",
    "NormalizedRoi",
    "TruncationParams",
    "segment_breast",
    "truncate_normalize",
    "truncation_percentiles",
]
