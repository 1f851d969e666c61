import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from pipeline.core.io import write_image, write_mask
from pipeline.core.types import BBox, BinaryMask, GrayImage
from pipeline.manifest.manifest import DatasetManifest, ManifestEntry, save_manifest

HEIGHT, WIDTH = 96, 128
BREAST_CENTRE, BREAST_RADIUS = (48, 0), 44


def breast_disc(height=HEIGHT, width=WIDTH, centre=BREAST_CENTRE, radius=BREAST_RADIUS):
    ys, xs = np.mgrid[0:height, 0:width]
    cy, cx = centre
    return (ys - cy) ** 2 + (xs - cx) ** 2 <= radius * radius


def synthetic_mammogram(seed=0, lesion=BBox(10, 40, 22, 52)):
    """16-bit half-disc breast against the left edge with one bright square lesion."""
    rng = np.random.default_rng(seed)
    breast = breast_disc()
    pixels = rng.integers(0, 50, size=(HEIGHT, WIDTH)).astype(np.int64)
    xs = np.arange(WIDTH)[None, :]
    tissue = 20000 + 150 * xs + rng.integers(0, 2000, size=(HEIGHT, WIDTH))
    pixels = np.where(breast, tissue, pixels)
    lesion_bits = np.zeros((HEIGHT, WIDTH), dtype=bool)
    lesion_bits[lesion.y_min:lesion.y_max, lesion.x_min:lesion.x_max] = True
    pixels = np.where(lesion_bits, pixels + 8000, pixels)
    return GrayImage(pixels, 16), BinaryMask(lesion_bits), BBox(*lesion.as_tuple())


@pytest.fixture
def mammogram():
    return synthetic_mammogram()


def write_dataset(root, count=3, seed=0):
    """Dataset directory with ``count`` mammograms, one lesion mask each, and its manifest."""
    root = Path(root)
    entries = []
    for i in range(count):
        rng = np.random.default_rng(seed + i)
        x, y = int(rng.integers(6, 16)), int(rng.integers(36, 46))
        img, mask, box = synthetic_mammogram(seed + i, BBox(x, y, x + 12, y + 12))
        write_image(root / f"img{i}.png", img)
        write_mask(root / f"img{i}_mask0.png", mask)
        entries.append(
            ManifestEntry(
                image_path=f"img{i}.png",
                gt_boxes=[box],
                lesion_mask_paths=[f"img{i}_mask0.png"],
                patient_id=f"p{i // 2}",
                laterality="L",
                view="CC" if i % 2 == 0 else "MLO",
            )
        )
    manifest = DatasetManifest(entries=entries)
    save_manifest(root / "manifest.json", manifest)
    return manifest


@pytest.fixture
def dataset_dir(tmp_path):
    root = tmp_path / "dataset"
    write_dataset(root)
    return root


def small_sample_dataset(root, count=10, size=48):
    """8-bit images with a lesion mask and a breast mask each, for fast augmentation runs."""
    root = Path(root)
    entries = []
    ys, xs = np.mgrid[0:size, 0:size]
    for i in range(count):
        rng = np.random.default_rng(100 + i)
        breast = (ys - size // 2) ** 2 + xs**2 <= (size - 8) ** 2
        pixels = np.where(breast, 120 + rng.integers(0, 60, size=(size, size)), rng.integers(0, 5, size=(size, size)))
        cy, cx = int(rng.integers(16, 28)), int(rng.integers(8, 16))
        lesion = (ys - cy) ** 2 + (xs - cx) ** 2 <= 25
        pixels = np.where(lesion, 230, pixels)
        write_image(root / f"s{i}.png", GrayImage(pixels, 8))
        write_mask(root / f"s{i}_mask0.png", BinaryMask(lesion))
        write_mask(root / f"s{i}_breast.png", BinaryMask(breast))
        entries.append(
            ManifestEntry(
                image_path=f"s{i}.png",
                gt_boxes=[BBox(cx - 5, cy - 5, cx + 6, cy + 6)],
                lesion_mask_paths=[f"s{i}_mask0.png"],
                breast_mask_path=f"s{i}_breast.png",
            )
        )
    manifest = DatasetManifest(entries=entries)
    save_manifest(root / "manifest.json", manifest)
    return manifest
