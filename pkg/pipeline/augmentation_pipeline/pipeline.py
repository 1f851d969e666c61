import shutil
from dataclasses import dataclass, field
from pathlib import Path

from datasets.fingerprint import Hasher
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..core.boxes import tight_box
from ..core.io import read_mask, read_planes, write_mask, write_planes
from ..manifest.manifest import MANIFEST_NAME, DatasetManifest, ManifestEntry, load_manifest, save_manifest
from ..normalization_pipeline.segment_breast import segment_breast
from ..utils.errors import DeformationOutOfBoundsError, PipelineError
from ..utils.utils import config_fingerprint, make_rng, run_parallel, split_seed, write_json
from .classic import ClassicAugmentRanges, classic_augment, transform_mask
from .elastic import ElasticParams
from .inpaint import DEFAULT_INPAINT_RADIUS
from .natural_deform import AugmentSample, NaturalDeform, random_breast_regions

NON_MASS_STREAM = 1000
CLASSIC_STREAM = 2000


class AugmentBatchConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    natural_per_image: int = Field(default=1, ge=0)
    non_mass_regions: int = Field(default=2, ge=0)
    classic_per_image: int = Field(default=0, ge=0)
    inpaint_radius: int = Field(default=DEFAULT_INPAINT_RADIUS, ge=1)


@dataclass
class AugmentedItem:
    entries: list = field(default_factory=list)
    audit: list = field(default_factory=list)


def _sample_planes(planes, masks):
    return [AugmentSample.from_masks(p, masks) for p in planes]


class AugmentationPipeline:
    """Expands each manifest entry into its original plus natural-deformation and classic variants."""

    def __init__(self, batch=None, elastic=None, classic=None, seed=0):
        self.batch = batch or AugmentBatchConfig()
        self.elastic = elastic or ElasticParams()
        self.classic = classic or ClassicAugmentRanges()
        self.seed = seed
        self.deform = NaturalDeform(self.batch.inpaint_radius)

    @property
    def version(self):
        return Hasher.hash(
            [
                NaturalDeform.CONFIG_HASH,
                self.batch.model_dump(),
                self.elastic.model_dump(),
                self.classic.model_dump(),
                self.seed,
            ]
        )

    def _deform(self, samples, target, seed):
        params = self.elastic.model_copy(update={"seed": seed})
        return [self.deform(s, target, params) for s in samples]

    def natural_variant(self, index, variant, planes, masks, breast):
        """Deform every lesion, then ``non_mass_regions`` random breast regions, with per-target seeds."""
        samples = _sample_planes(planes, masks)
        record = {"kind": "natural", "variant": variant, "seed": split_seed(self.seed, index, variant), "targets": []}

        for k in range(len(masks)):
            seed = split_seed(self.seed, index, variant, k)
            try:
                samples = self._deform(samples, samples[0].lesion_masks[k], seed)
            except DeformationOutOfBoundsError as e:
                logger.warning(f"Entry {index} variant {variant}: lesion {k} not deformed ({e}).")
                continue
            record["targets"].append({"type": "mass", "lesion": k, "seed": seed, "box": samples[0].boxes[k].to_dict()})

        if self.batch.non_mass_regions and breast is not None:
            rng = make_rng(self.seed, index, variant, NON_MASS_STREAM)
            regions = random_breast_regions(breast, samples[0].lesion_masks, self.batch.non_mass_regions, rng)
            for r, region in enumerate(regions):
                seed = split_seed(self.seed, index, variant, NON_MASS_STREAM + r)
                try:
                    samples = self._deform(samples, region, seed)
                except DeformationOutOfBoundsError as e:
                    logger.warning(f"Entry {index} variant {variant}: region {r} not deformed ({e}).")
                    continue
                record["targets"].append({"type": "non_mass", "region": r, "seed": seed, "area": region.area})

        record["params"] = self.elastic.model_dump(exclude={"seed"}) | {"inpaint_radius": self.batch.inpaint_radius}
        return [s.image for s in samples], list(samples[0].lesion_masks), breast, record

    def classic_variant(self, index, variant, planes, masks, breast):
        seed = split_seed(self.seed, index, CLASSIC_STREAM + variant)
        cfg = self.classic.sample(make_rng(seed), seed)
        samples = [classic_augment(s, cfg) for s in _sample_planes(planes, masks)]
        moved_breast = transform_mask(breast, cfg) if breast is not None else None
        record = {"kind": "classic", "variant": variant, "seed": seed, "params": cfg.model_dump()}
        return [s.image for s in samples], list(samples[0].lesion_masks), moved_breast, record

    def variants(self, index, planes, masks, breast, has_masses):
        """Yield ``(suffix, planes, masks, breast_mask, audit_record)`` for every derived image."""
        natural = self.batch.natural_per_image
        if natural and has_masses and not masks:
            logger.warning(f"Entry {index} has masses but no lesion masks; skipping natural deformation.")
            natural = 0
        for j in range(natural):
            yield (f"nd{j}", *self.natural_variant(index, j, planes, masks, breast))
        for j in range(self.batch.classic_per_image):
            yield (f"ca{j}", *self.classic_variant(index, j, planes, masks, breast))


def _breast_mask(entry, root, planes):
    if entry.breast_mask_path:
        return read_mask(root / entry.breast_mask_path)
    try:
        return segment_breast(planes[0]).full_mask(planes[0].shape)
    except PipelineError as e:
        logger.warning(f"{entry.image_id}: no breast mask available ({e}).")
        return None


def _copy(src, dst):
    dst.parent.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(src, dst)
    return dst


def augment_entry(pipeline, index, entry, root, out_dir):
    """Write the original and every variant of one entry; returns the new manifest entries and audit records."""
    root, out_dir = Path(root), Path(out_dir)
    item = AugmentedItem()
    suffix = Path(entry.image_path).suffix

    image_out = _copy(root / entry.image_path, out_dir / "images" / f"{entry.image_id}{suffix}")
    mask_outs = [
        _copy(root / p, out_dir / "masks" / f"{entry.image_id}_m{k}.png") for k, p in enumerate(entry.lesion_mask_paths)
    ]
    breast_out = (
        _copy(root / entry.breast_mask_path, out_dir / "masks" / f"{entry.image_id}_breast.png")
        if entry.breast_mask_path
        else None
    )
    item.entries.append(
        entry.model_copy(
            update={
                "image_path": image_out.relative_to(out_dir).as_posix(),
                "lesion_mask_paths": [m.relative_to(out_dir).as_posix() for m in mask_outs],
                "breast_mask_path": breast_out.relative_to(out_dir).as_posix() if breast_out else None,
            }
        )
    )
    item.audit.append({"image_id": entry.image_id, "source": entry.image_id, "kind": "original"})

    wants_natural = pipeline.batch.natural_per_image > 0
    if not wants_natural and pipeline.batch.classic_per_image == 0:
        return item

    planes = read_planes(root / entry.image_path)
    masks = [read_mask(root / p) for p in entry.lesion_mask_paths]
    breast = _breast_mask(entry, root, planes) if wants_natural or entry.breast_mask_path else None

    for suffix_tag, new_planes, new_masks, new_breast, record in pipeline.variants(
        index, planes, masks, breast, entry.has_masses
    ):
        image_id = f"{entry.image_id}__{suffix_tag}"
        image_path = write_planes(out_dir / "images" / f"{image_id}.png", new_planes)
        mask_paths = [write_mask(out_dir / "masks" / f"{image_id}_m{k}.png", m) for k, m in enumerate(new_masks)]
        breast_path = write_mask(out_dir / "masks" / f"{image_id}_breast.png", new_breast) if new_breast is not None else None
        boxes = [tight_box(m) for m in new_masks]

        item.entries.append(
            ManifestEntry(
                image_path=image_path.relative_to(out_dir).as_posix(),
                image_id=image_id,
                gt_boxes=list(boxes),
                lesion_mask_paths=[p.relative_to(out_dir).as_posix() for p in mask_paths],
                breast_mask_path=breast_path.relative_to(out_dir).as_posix() if breast_path else None,
                split_tag=entry.split_tag,
                patient_id=entry.patient_id,
                laterality=entry.laterality,
                view=entry.view,
            )
        )
        item.audit.append({"image_id": image_id, "source": entry.image_id, **record})
    return item


def augment_batch(manifest, root, out_dir, pipeline, jobs=1):
    """
    Augment every entry of ``manifest`` into ``out_dir``.

    Returns ``(manifest, audit, failures)``; a failing entry is reported in
    ``failures`` and contributes nothing else.
    """
    out_dir = Path(out_dir)
    indexed = list(enumerate(manifest.entries))
    results = run_parallel(
        lambda pair: augment_entry(pipeline, pair[0], pair[1], root, out_dir),
        indexed,
        jobs=jobs,
        desc="Augment",
    )

    entries, audit, failures = [], [], []
    for (index, entry), (ok, value) in zip(indexed, results):
        if ok:
            entries.extend(value.entries)
            audit.extend(value.audit)
        else:
            logger.error(f"Augmenting {entry.image_id} failed: {value!r}")
            failures.append({"index": index, "image_id": entry.image_id, "error": repr(value)})
    return DatasetManifest(entries=entries), audit, failures


def augment_command(args, config):
    manifest, root = load_manifest(args.dataset)
    out_dir = Path(args.output)
    pipeline = AugmentationPipeline(config.augment, config.elastic, config.classic, config.seed)
    logger.info(f"Augmenting {len(manifest)} entries into {out_dir} with {config.jobs} worker(s).")

    result, audit, failures = augment_batch(manifest, root, out_dir, pipeline, config.jobs)
    save_manifest(out_dir / MANIFEST_NAME, result)
    write_json(
        out_dir / "augment_audit.json",
        {"fingerprint": pipeline.version, "config": config_fingerprint(config), "seed": config.seed, "items": audit},
    )
    if failures:
        write_json(out_dir / "failures.json", failures)
        logger.error(f"{len(failures)} of {len(manifest)} entries failed, see failures.json.")
        return 1
    logger.success(f"Wrote {len(result)} entries ({len(result) - len(manifest)} variants).")
    return 0
