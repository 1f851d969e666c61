import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.types import BBox
from ..utils.utils import read_json, write_json

MANIFEST_NAME = "manifest.json"


class ManifestEntry(BaseModel):
    """
    One mammogram of a dataset.

    Paths are stored relative to the manifest file. ``gt_boxes[k]`` belongs to
    ``lesion_mask_paths[k]`` whenever masks are present.
    """

    model_config = ConfigDict(extra="forbid")

    image_path: str
    image_id: str = ""
    gt_boxes: list[BBox] = Field(default_factory=list)
    lesion_mask_paths: list[str] = Field(default_factory=list)
    breast_mask_path: Optional[str] = None
    split_tag: str = "train"
    patient_id: Optional[str] = None
    laterality: Optional[str] = None
    view: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        if not self.image_id:
            self.image_id = Path(self.image_path).stem
        if self.lesion_mask_paths and len(self.lesion_mask_paths) != len(self.gt_boxes):
            raise ValueError(
                f"{self.image_id}: {len(self.gt_boxes)} boxes but {len(self.lesion_mask_paths)} lesion masks."
            )
        return self

    @property
    def has_masses(self):
        return bool(self.gt_boxes)

    @property
    def breast_key(self):
        """Identifies the breast an image shows; CC and MLO views of one breast share it."""
        if self.patient_id is None:
            return self.image_id
        return f"{self.patient_id}:{self.laterality or '?'}"


class DatasetManifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    entries: list[ManifestEntry] = Field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def manifest_path(path):
    """Accept either a manifest file or a dataset directory holding ``manifest.json``."""
    path = Path(path)
    return path / MANIFEST_NAME if path.is_dir() else path


def load_manifest(path, check_paths=True):
    """Load a manifest; returns the manifest and the directory its paths are relative to."""
    path = manifest_path(path)
    manifest = DatasetManifest.model_validate(read_json(path))
    root = path.parent
    if check_paths:
        for entry in manifest.entries:
            for rel in [entry.image_path, *entry.lesion_mask_paths]:
                if not (root / rel).exists():
                    raise FileNotFoundError(f"{path}: entry {entry.image_id} references missing file {rel}.")
    return manifest, root


def save_manifest(path, manifest):
    return write_json(path, manifest.model_dump(mode="json"))


def rebase_manifest(manifest, root, new_root):
    """Rewrite every path so it is relative to ``new_root`` instead of ``root``."""

    def move(rel):
        return Path(os.path.relpath((Path(root) / rel).resolve(), Path(new_root).resolve())).as_posix()

    entries = [
        e.model_copy(
            update={
                "image_path": move(e.image_path),
                "lesion_mask_paths": [move(p) for p in e.lesion_mask_paths],
                "breast_mask_path": move(e.breast_mask_path) if e.breast_mask_path else None,
            }
        )
        for e in manifest.entries
    ]
    return DatasetManifest(entries=entries)
