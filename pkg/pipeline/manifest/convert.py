"""
Build manifests from the native layouts of the public mammography datasets.

INbreast-style: a flat directory of images, each optionally accompanied by a
PASCAL-VOC XML sidecar ``<stem>.xml`` listing mass boxes and lesion masks
``<stem>_mask<k>.png`` in the same order. Patient, laterality and view come
from the INbreast file name, e.g. ``20586908_6c613a14b80a8591_MG_R_CC_ANON``.

DDSM-style: a CBIS-DDSM description CSV with one row per abnormality.
"""

import os
import re
import xml.etree.ElementTree as ET
from pathlib import Path

import pandas as pd
from loguru import logger

from ..core.boxes import tight_box
from ..core.io import read_mask
from ..core.types import BBox
from ..utils.errors import EmptyMaskError, ParameterError, ParseError
from .manifest import DatasetManifest, ManifestEntry

IMAGE_SUFFIXES = (".png", ".pgm")
INBREAST_NAME = re.compile(r"^(?P<file_id>\d+)_(?P<patient>[0-9a-fA-F]+)_MG_(?P<laterality>[LR])_(?P<view>CC|MLO|ML)")
MASS_LABELS = ("mass",)

DDSM_COLUMNS = {
    "patient_id": "patient_id",
    "laterality": "left or right breast",
    "view": "image view",
    "image": "image file path",
    "mask": "ROI mask file path",
}


def _relative(path, out_dir):
    return Path(os.path.relpath(Path(path).resolve(), Path(out_dir).resolve())).as_posix()


def parse_voc_boxes(xml_path, labels=MASS_LABELS):
    """
    Mass boxes of a VOC annotation, converted to half-open pixel boxes.

    VOC corners are 1-based and inclusive, so (xmin, ymin, xmax, ymax) becomes
    (xmin - 1, ymin - 1, xmax, ymax).
    """
    try:
        root = ET.parse(xml_path).getroot()
    except ET.ParseError as e:
        raise ParseError(xml_path, e.position[0], f"malformed XML ({e})") from e

    boxes = []
    for k, node in enumerate(root.findall("object")):
        name = node.find("name")
        if name is not None and name.text and name.text.strip().lower() not in labels:
            continue
        bndbox = node.find("bndbox")
        if bndbox is None:
            raise ParseError(xml_path, k + 1, "object without <bndbox>")
        try:
            x_min, y_min, x_max, y_max = (
                int(round(float(bndbox.find(tag).text))) for tag in ("xmin", "ymin", "xmax", "ymax")
            )
            boxes.append(BBox(x_min - 1, y_min - 1, x_max, y_max))
        except (AttributeError, TypeError, ValueError) as e:
            raise ParseError(xml_path, k + 1, f"invalid box ({e})") from e
    return boxes


def _mask_index(path):
    digits = re.search(r"_mask(\d+)$", path.stem)
    return int(digits.group(1)) if digits else 0


def discover_inbreast_images(source_dir):
    source_dir = Path(source_dir)
    if not source_dir.is_dir():
        raise FileNotFoundError(f"Dataset directory does not exist: {source_dir}")
    images = sorted(
        p for p in source_dir.iterdir()
        if p.suffix.lower() in IMAGE_SUFFIXES and "_mask" not in p.stem and not p.stem.endswith("_breast")
    )
    logger.info(f"Found {len(images)} images in {source_dir}")
    return images


def convert_inbreast(source_dir, out_dir):
    entries = []
    for image in discover_inbreast_images(source_dir):
        sidecar = image.with_suffix(".xml")
        boxes = parse_voc_boxes(sidecar) if sidecar.exists() else []
        masks = sorted(image.parent.glob(f"{image.stem}_mask*.png"), key=_mask_index)
        if masks and len(masks) != len(boxes):
            logger.warning(f"{image.name}: {len(masks)} masks for {len(boxes)} boxes, ignoring the masks.")
            masks = []

        match = INBREAST_NAME.match(image.stem)
        if match is None:
            logger.warning(f"{image.name}: file name carries no patient/laterality/view.")
        entries.append(
            ManifestEntry(
                image_path=_relative(image, out_dir),
                image_id=image.stem,
                gt_boxes=boxes,
                lesion_mask_paths=[_relative(m, out_dir) for m in masks],
                patient_id=match["patient"] if match else None,
                laterality=match["laterality"] if match else None,
                view=match["view"] if match else None,
            )
        )
    logger.info(f"Converted {len(entries)} images, {sum(len(e.gt_boxes) for e in entries)} masses.")
    return DatasetManifest(entries=entries)


def convert_ddsm(csv_path, out_dir):
    csv_path = Path(csv_path)
    df = pd.read_csv(csv_path, dtype=str)
    missing = [c for c in DDSM_COLUMNS.values() if c not in df.columns]
    if missing:
        raise ParseError(csv_path, 1, f"missing columns {missing}")

    root = csv_path.parent
    grouped = {}
    for idx, row in df.iterrows():
        # header is row 1
        row_number = idx + 2
        image = str(row[DDSM_COLUMNS["image"]]).strip()
        mask = str(row[DDSM_COLUMNS["mask"]]).strip()
        if not image or image == "nan":
            raise ParseError(csv_path, row_number, "empty image file path")
        try:
            box = tight_box(read_mask(root / mask))
        except (OSError, ParameterError, EmptyMaskError) as e:
            raise ParseError(csv_path, row_number, f"unreadable ROI mask {mask!r} ({e})") from e

        if image not in grouped:
            grouped[image] = {
                "patient_id": str(row[DDSM_COLUMNS["patient_id"]]).strip(),
                "laterality": str(row[DDSM_COLUMNS["laterality"]]).strip()[:1].upper(),
                "view": str(row[DDSM_COLUMNS["view"]]).strip().upper(),
                "boxes": [],
                "masks": [],
            }
        grouped[image]["boxes"].append(box)
        grouped[image]["masks"].append(mask)

        if (idx + 1) % 100 == 0 or (idx + 1) == len(df):
            logger.info(f"Processed {idx + 1}/{len(df)} rows")

    entries = [
        ManifestEntry(
            image_path=_relative(root / image, out_dir),
            image_id=Path(image).with_suffix("").as_posix().replace("/", "_"),
            gt_boxes=info["boxes"],
            lesion_mask_paths=[_relative(root / m, out_dir) for m in info["masks"]],
            patient_id=info["patient_id"],
            laterality=info["laterality"],
            view=info["view"],
        )
        for image, info in sorted(grouped.items())
    ]
    logger.info(f"Converted {len(entries)} images from {len(df)} abnormality rows.")
    return DatasetManifest(entries=entries)


CONVERTERS = {"inbreast": convert_inbreast, "ddsm": convert_ddsm}
