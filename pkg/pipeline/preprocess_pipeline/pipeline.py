from dataclasses import dataclass
from pathlib import Path

from datasets.fingerprint import Hasher
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..augmentation_pipeline.resize import LONG_SIDE, SHORT_SIDE, resize_for_model, resize_mask
from ..core.io import read_image, read_mask, write_mask, write_rgb_png
from ..enhancement_pipeline.pipeline import EnhancementPipeline
from ..manifest.manifest import MANIFEST_NAME, DatasetManifest, ManifestEntry, load_manifest, save_manifest
from ..normalization_pipeline.pipeline import NormalizationPipeline
from ..normalization_pipeline.truncation import NO_TRUNCATION
from ..utils.utils import config_fingerprint, run_parallel, write_json


class PreprocessConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    truncate: bool = True
    enhance: bool = True
    short_side: int = Field(default=SHORT_SIDE, ge=1)
    long_side: int = Field(default=LONG_SIDE, ge=1)


@dataclass
class PreprocessedItem:
    entry: ManifestEntry
    provenance: dict


class PreprocessPipeline:
    """segment -> truncation normalize -> three-channel synthesis -> detector resize."""

    def __init__(self, cfg=None, sigma=2.0, truncation=None, clahe=None):
        self.cfg = cfg or PreprocessConfig()
        params = truncation if self.cfg.truncate else NO_TRUNCATION
        self.normalization = NormalizationPipeline(sigma, params)
        self.enhancement = EnhancementPipeline(clahe, enhance=self.cfg.enhance)

    @property
    def version(self):
        return Hasher.hash([self.cfg.model_dump(), self.normalization.version, self.enhancement.version])

    def run(self, img, boxes=(), masks=()):
        """
        Preprocess one mammogram with its boxes and lesion masks.

        Boxes are moved into crop coordinates and then scaled with the image.
        Returns ``(rgb, boxes, masks, breast_mask, info)``; a box that falls
        outside the breast crop is dropped together with its mask.
        """
        norm = self.normalization.run(img)
        roi = norm.roi
        kept = []
        for k, box in enumerate(boxes):
            crop_box = roi.to_crop(box)
            if crop_box is None:
                logger.warning(f"Box {box.as_tuple()} lies outside the breast crop; dropping it.")
                continue
            kept.append((k, crop_box))

        rgb = self.enhancement.run(norm.image)
        rgb, new_boxes, scale = resize_for_model(
            rgb, [b for _, b in kept], self.cfg.short_side, self.cfg.long_side
        )
        size = (rgb.width, rgb.height)
        crop = roi.box
        new_masks = [resize_mask(masks[k].crop(crop), size) for k, _ in kept if k < len(masks)]
        breast = resize_mask(roi.mask, size)

        info = norm.describe() | {"scale": scale, "output_width": rgb.width, "output_height": rgb.height}
        return rgb, new_boxes, new_masks, breast, info


def preprocess_entry(pipeline, entry, root, out_dir):
    root, out_dir = Path(root), Path(out_dir)
    img = read_image(root / entry.image_path)
    masks = [read_mask(root / p) for p in entry.lesion_mask_paths]
    rgb, boxes, masks, breast, info = pipeline.run(img, entry.gt_boxes, masks)

    image_path = write_rgb_png(out_dir / "images" / f"{entry.image_id}.png", rgb.planes())
    mask_paths = [write_mask(out_dir / "masks" / f"{entry.image_id}_m{k}.png", m) for k, m in enumerate(masks)]
    breast_path = write_mask(out_dir / "masks" / f"{entry.image_id}_breast.png", breast)

    new_entry = entry.model_copy(
        update={
            "image_path": image_path.relative_to(out_dir).as_posix(),
            "gt_boxes": boxes,
            "lesion_mask_paths": [p.relative_to(out_dir).as_posix() for p in mask_paths],
            "breast_mask_path": breast_path.relative_to(out_dir).as_posix(),
        }
    )
    info |= {"image_id": entry.image_id, "source": entry.image_path, "boxes": [b.to_dict() for b in boxes]}
    return PreprocessedItem(new_entry, info)


def preprocess_batch(manifest, root, out_dir, pipeline, jobs=1):
    """Preprocess every entry; returns ``(manifest, provenance_items, failures)``."""
    results = run_parallel(
        lambda entry: preprocess_entry(pipeline, entry, root, out_dir),
        manifest.entries,
        jobs=jobs,
        desc="Preprocess",
    )
    entries, provenance, failures = [], [], []
    for index, (entry, (ok, value)) in enumerate(zip(manifest.entries, results)):
        if ok:
            entries.append(value.entry)
            provenance.append(value.provenance)
        else:
            logger.error(f"Preprocessing {entry.image_id} failed: {value!r}")
            failures.append({"index": index, "image_id": entry.image_id, "error": repr(value)})
    return DatasetManifest(entries=entries), provenance, failures


def preprocess_command(args, config):
    manifest, root = load_manifest(args.dataset)
    out_dir = Path(args.output)
    pipeline = PreprocessPipeline(config.preprocess, config.sigma, config.truncation, config.clahe)
    logger.info(f"Preprocessing {len(manifest)} images into {out_dir} with {config.jobs} worker(s).")

    result, provenance, failures = preprocess_batch(manifest, root, out_dir, pipeline, config.jobs)
    save_manifest(out_dir / MANIFEST_NAME, result)
    write_json(
        out_dir / "provenance.json",
        {
            "fingerprint": pipeline.version,
            "config": config_fingerprint(config),
            "parameters": {
                "preprocess": config.preprocess.model_dump(),
                "sigma": config.sigma,
                "truncation": config.truncation.model_dump(),
                "clahe": config.clahe.model_dump(),
            },
            "items": provenance,
        },
    )
    if failures:
        write_json(out_dir / "failures.json", failures)
        logger.error(f"{len(failures)} of {len(manifest)} images failed, see failures.json.")
        return 1
    logger.success(f"Preprocessed {len(result)} images.")
    return 0
