from .classic import ClassicAugmentConfig, ClassicAugmentRanges, classic_augment, transform_image, transform_mask
from .elastic import DisplacementField, ElasticParams, make_displacement_field, warp, warp_mask
from .inpaint import inpaint_array, inpaint_fmm
from .natural_deform import AugmentSample, NaturalDeform, natural_deform, random_breast_regions
from .pipeline import AugmentationPipeline, AugmentBatchConfig, augment_batch, augment_entry
from .resize import model_scale, resize_for_model, resize_image, resize_mask

__all__ = [
    "AugmentBatchConfig",
    "AugmentSample",
    "AugmentationPipeline",
    "ClassicAugmentConfig",
    "ClassicAugmentRanges",
    "DisplacementField",
    "ElasticParams",
    "NaturalDeform",
    "augment_batch",
    "augment_entry",
    "classic_augment",
    "inpaint_array",
    "inpaint_fmm",
    "make_displacement_field",
    "model_scale",
    "natural_deform",
    "random_breast_regions",
    "resize_for_model",
    "resize_image",
    "resize_mask",
    "transform_image",
    "transform_mask",
    "warp",
    "warp_mask",
]
