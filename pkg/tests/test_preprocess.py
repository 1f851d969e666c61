import numpy as np

from pipeline.core.io import read_mask, read_rgb_png
from pipeline.manifest.manifest import DatasetManifest, load_manifest
from pipeline.preprocess_pipeline import PreprocessConfig, PreprocessPipeline, preprocess_batch

SMALL = PreprocessConfig(short_side=64, long_side=128)


def test_boxes_follow_crop_and_scale(dataset_dir, tmp_path):
    manifest, root = load_manifest(dataset_dir)
    out_dir = tmp_path / "pre"
    result, provenance, failures = preprocess_batch(manifest, root, out_dir, PreprocessPipeline(SMALL))

    assert failures == []
    assert len(result) == len(manifest)
    for before, after, info in zip(manifest, result, provenance):
        x0, y0 = info["origin"]
        scale = info["scale"]
        (box,) = before.gt_boxes
        (out_box,) = after.gt_boxes
        # map the output box back into the original image
        for original, resized, origin in (
            (box.x_min, out_box.x_min, x0),
            (box.y_min, out_box.y_min, y0),
            (box.x_max, out_box.x_max, x0),
            (box.y_max, out_box.y_max, y0),
        ):
            assert abs(resized / scale + origin - original) <= 1 / scale

        rgb = read_rgb_png(out_dir / after.image_path)
        assert rgb[0].shape == (info["output_height"], info["output_width"])
        assert min(rgb[0].shape) == 64 or max(rgb[0].shape) == 128
        mask = read_mask(out_dir / after.lesion_mask_paths[0])
        breast = read_mask(out_dir / after.breast_mask_path)
        assert mask.shape == breast.shape == rgb[0].shape
        assert (mask & breast).any()


def test_empty_manifest(tmp_path):
    result, provenance, failures = preprocess_batch(DatasetManifest(), tmp_path, tmp_path / "out", PreprocessPipeline())
    assert (len(result), provenance, failures) == (0, [], [])


def test_ablations_change_the_output(dataset_dir, tmp_path):
    manifest, root = load_manifest(dataset_dir)
    entry = DatasetManifest(entries=manifest.entries[:1])
    planes = {}
    for name, cfg in {
        "full": SMALL,
        "no_enhancement": SMALL.model_copy(update={"enhance": False}),
        "no_truncation": SMALL.model_copy(update={"truncate": False}),
    }.items():
        result, provenance, _ = preprocess_batch(entry, root, tmp_path / name, PreprocessPipeline(cfg))
        planes[name] = (read_rgb_png(tmp_path / name / result.entries[0].image_path), provenance[0])

    flat, _ = planes["no_enhancement"]
    assert np.array_equal(flat[0], flat[1]) and np.array_equal(flat[1], flat[2])
    full, full_info = planes["full"]
    assert not np.array_equal(full[0], full[1])
    _, plain_info = planes["no_truncation"]
    assert plain_info["p_min"] < full_info["p_min"]
    assert plain_info["p_max"] > full_info["p_max"]


def test_failures_are_reported(dataset_dir, tmp_path):
    manifest, root = load_manifest(dataset_dir)
    (root / manifest.entries[1].image_path).write_bytes(b"not a png")
    result, _, failures = preprocess_batch(manifest, root, tmp_path / "out", PreprocessPipeline(SMALL), jobs=2)
    assert len(result) == 2
    assert [f["image_id"] for f in failures] == [manifest.entries[1].image_id]
