from .convert import CONVERTERS, convert_ddsm, convert_inbreast, parse_voc_boxes
from .folds import split_folds
from .manifest import (
    MANIFEST_NAME,
    DatasetManifest,
    ManifestEntry,
    load_manifest,
    manifest_path,
    rebase_manifest,
    save_manifest,
)

__all__ = [
    "CONVERTERS",
    "MANIFEST_NAME",
    "DatasetManifest",
    "ManifestEntry",
    "convert_ddsm",
    "convert_inbreast",
    "load_manifest",
    "manifest_path",
    "parse_voc_boxes",
    "rebase_manifest",
    "save_manifest",
    "split_folds",
]
