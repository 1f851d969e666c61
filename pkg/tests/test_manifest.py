import json

import numpy as np
import pytest
from pydantic import ValidationError

from pipeline.core.io import write_image, write_mask
from pipeline.core.types import BBox, BinaryMask, GrayImage
from pipeline.manifest import (
    DatasetManifest,
    ManifestEntry,
    convert_ddsm,
    convert_inbreast,
    load_manifest,
    parse_voc_boxes,
    rebase_manifest,
    split_folds,
)
from pipeline.utils.errors import ParameterError, ParseError

INBREAST_STEM = "20586908_6c613a14b80a8591_MG_R_CC_ANON"

VOC = """<annotation>
  <object><name>Mass</name><bndbox><xmin>3</xmin><ymin>4</ymin><xmax>10</xmax><ymax>12</ymax></bndbox></object>
  <object><name>Calcification</name><bndbox><xmin>1</xmin><ymin>1</ymin><xmax>2</xmax><ymax>2</ymax></bndbox></object>
</annotation>
"""


def _entries():
    entries = []
    for patient in range(6):
        for view in ("CC", "MLO"):
            has_mass = patient % 3 != 0
            entries.append(
                ManifestEntry(
                    image_path=f"p{patient}_{view}.png",
                    gt_boxes=[BBox(0, 0, 5, 5)] if has_mass else [],
                    patient_id=f"p{patient}",
                    laterality="L",
                    view=view,
                )
            )
    return DatasetManifest(entries=entries)


def test_entry_defaults_and_validation():
    entry = ManifestEntry(image_path="scans/a.png")
    assert entry.image_id == "a"
    assert entry.breast_key == "a"
    with pytest.raises(ValidationError):
        ManifestEntry(image_path="a.png", gt_boxes=[], lesion_mask_paths=["m.png"])
    with pytest.raises(ValidationError):
        ManifestEntry(image_path="a.png", colour="red")


def test_split_folds_keeps_views_together():
    folds = split_folds(_entries(), folds=2, seed=0)
    assert sum(len(f) for f in folds) == 12
    assert [len(f) for f in folds] == [6, 6]
    keys = [{e.breast_key for e in fold} for fold in folds]
    assert not keys[0] & keys[1]
    assert all(e.split_tag == f"fold{k}" for k, fold in enumerate(folds) for e in fold)
    assert split_folds(_entries(), folds=2, seed=0) == folds


def test_split_folds_masses_only():
    folds = split_folds(_entries(), folds=2, masses_only=True)
    assert sum(len(f) for f in folds) == 8
    assert all(e.has_masses for fold in folds for e in fold)
    with pytest.raises(ParameterError):
        split_folds(_entries(), folds=1)


def test_manifest_roundtrip_and_missing_files(dataset_dir):
    manifest, root = load_manifest(dataset_dir)
    assert root == dataset_dir
    assert len(manifest) == 3
    assert manifest.entries[0].gt_boxes[0].width == 12

    (dataset_dir / "img1.png").unlink()
    with pytest.raises(FileNotFoundError):
        load_manifest(dataset_dir / "manifest.json")


def test_rebase_manifest(dataset_dir, tmp_path):
    manifest, root = load_manifest(dataset_dir)
    moved = rebase_manifest(manifest, root, tmp_path / "folds")
    assert moved.entries[0].image_path == "../dataset/img0.png"


def test_parse_voc_boxes(tmp_path):
    path = tmp_path / "a.xml"
    path.write_text(VOC)
    assert parse_voc_boxes(path) == [BBox(2, 3, 10, 12)]
    path.write_text("<annotation><object>")
    with pytest.raises(ParseError):
        parse_voc_boxes(path)


def test_convert_inbreast(tmp_path):
    source = tmp_path / "inbreast"
    img = GrayImage(np.zeros((20, 20)), 8)
    write_image(source / f"{INBREAST_STEM}.png", img)
    (source / f"{INBREAST_STEM}.xml").write_text(VOC)
    bits = np.zeros((20, 20), dtype=bool)
    bits[3:12, 2:10] = True
    write_mask(source / f"{INBREAST_STEM}_mask0.png", BinaryMask(bits))
    write_image(source / "normal.png", img)

    manifest = convert_inbreast(source, tmp_path)
    assert [e.image_id for e in manifest] == [INBREAST_STEM, "normal"]
    entry = manifest.entries[0]
    assert (entry.patient_id, entry.laterality, entry.view) == ("6c613a14b80a8591", "R", "CC")
    assert entry.gt_boxes == [BBox(2, 3, 10, 12)]
    assert entry.lesion_mask_paths == [f"inbreast/{INBREAST_STEM}_mask0.png"]
    assert manifest.entries[1].gt_boxes == []


def test_convert_ddsm(tmp_path):
    bits = np.zeros((30, 40), dtype=bool)
    bits[5:10, 6:16] = True
    write_mask(tmp_path / "roi" / "a_1.png", BinaryMask(bits))
    write_image(tmp_path / "full" / "a.png", GrayImage(np.zeros((30, 40)), 8))
    csv = tmp_path / "mass_case_description.csv"
    csv.write_text(
        "patient_id,left or right breast,image view,image file path,ROI mask file path\n"
        "P_00001,LEFT,CC,full/a.png,roi/a_1.png\n"
    )
    manifest = convert_ddsm(csv, tmp_path)
    (entry,) = manifest.entries
    assert entry.gt_boxes == [BBox(6, 5, 16, 10)]
    assert (entry.patient_id, entry.laterality, entry.view) == ("P_00001", "L", "CC")

    csv.write_text(csv.read_text() + "P_00002,RIGHT,MLO,full/b.png,roi/missing.png\n")
    with pytest.raises(ParseError, match=":3:"):
        convert_ddsm(csv, tmp_path)


def test_saved_manifest_is_plain_json(dataset_dir):
    data = json.loads((dataset_dir / "manifest.json").read_text())
    assert set(data["entries"][0]["gt_boxes"][0]) == {"x_min", "y_min", "x_max", "y_max"}
