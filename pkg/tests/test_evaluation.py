import itertools
import json

import numpy as np
import pytest

from pipeline.core.boxes import iou
from pipeline.core.types import BBox
from pipeline.evaluation_pipeline import (
    EvalThresholds,
    EvaluationPipeline,
    GroundTruth,
    Prediction,
    froc,
    load_ground_truth,
    load_predictions,
    match_and_count,
    plot_froc,
    write_froc_csv,
)
from pipeline.evaluation_pipeline.io import ground_truth_record, prediction_record
from pipeline.utils.errors import ParameterError, ParseError


def table_fixture():
    """100 masses over 107 images: 93 found above threshold, 53 confident false alarms."""
    gts = [GroundTruth(f"img{i:03d}", BBox(100, 100, 150, 150)) for i in range(100)]
    preds = [Prediction(f"img{i:03d}", BBox(102, 101, 151, 150), 0.9) for i in range(93)]
    preds += [Prediction(f"img{i % 107:03d}", BBox(300, 300, 340, 340), 0.8) for i in range(53)]
    preds += [Prediction(f"img{i:03d}", BBox(100, 100, 150, 150), 0.2) for i in range(93, 100)]
    return preds, gts


def test_table_fixture_round_trip():
    preds, gts = table_fixture()
    report = match_and_count(preds, gts, EvalThresholds(conf_th=0.5, iou_th=0.5), n_images=107)
    assert (report.tp, report.fp, report.fn) == (93, 53, 7)
    assert report.tpr == pytest.approx(0.930, abs=1e-9)
    assert report.fppi == pytest.approx(0.4953, abs=1e-4)


def test_true_negatives_are_dropped_predictions_away_from_masses():
    gts = [GroundTruth("a", BBox(0, 0, 10, 10))]
    preds = [
        Prediction("a", BBox(0, 0, 10, 10), 0.3),
        Prediction("a", BBox(50, 50, 60, 60), 0.3),
        Prediction("b", BBox(5, 5, 15, 15), 0.1),
    ]
    report = match_and_count(preds, gts, EvalThresholds(conf_th=0.5), n_images=2)
    assert (report.tp, report.fp, report.fn, report.tn) == (0, 0, 1, 2)
    assert report.tpr == 0.0


def test_duplicate_detections_count_once():
    gts = [GroundTruth("a", BBox(0, 0, 10, 10))]
    preds = [Prediction("a", BBox(0, 0, 10, 10), 0.9), Prediction("a", BBox(0, 0, 10, 11), 0.8)]
    report = match_and_count(preds, gts, EvalThresholds(), n_images=1)
    assert (report.tp, report.fp) == (1, 1)


def test_image_count_checks():
    gts = [GroundTruth("a", BBox(0, 0, 10, 10)), GroundTruth("b", BBox(0, 0, 10, 10))]
    with pytest.raises(ParameterError):
        match_and_count([], gts, EvalThresholds(), n_images=0)
    with pytest.raises(ParameterError):
        match_and_count([], gts, EvalThresholds(), n_images=1)
    with pytest.raises(ParameterError):
        match_and_count([], gts, EvalThresholds(), n_images=2, strategy="hungarian")


def test_prediction_confidence_range():
    with pytest.raises(ParameterError):
        Prediction("a", BBox(0, 0, 1, 1), 1.5)


def random_instance(rng, n_images=8):
    """Separated masses with jittered detections around them, plus stray boxes."""
    gts, preds = [], []
    for i in range(n_images):
        image_id = f"im{i}"
        for k in range(int(rng.integers(0, 4))):
            gt = BBox(100 * k, 0, 100 * k + 40, 40)
            gts.append(GroundTruth(image_id, gt))
            for _ in range(int(rng.integers(0, 3))):
                dx, dy = (int(v) for v in rng.integers(-12, 13, size=2))
                preds.append(Prediction(image_id, gt.translate(dx, dy), float(rng.integers(1, 20)) / 20))
        for _ in range(int(rng.integers(0, 3))):
            preds.append(Prediction(image_id, BBox(500, 500, 530, 530), float(rng.integers(1, 20)) / 20))
    return preds, gts


def brute_force_tp(preds, gts, iou_th):
    best = 0
    for size in range(min(len(preds), len(gts)), 0, -1):
        for chosen in itertools.permutations(range(len(gts)), size):
            for subset in itertools.combinations(range(len(preds)), size):
                if all(iou(preds[p].box, gts[g].box) >= iou_th for p, g in zip(subset, chosen)):
                    return size
    return best


def test_froc_is_monotone_and_matches_recounts():
    rng = np.random.default_rng(5)
    for _ in range(100):
        preds, gts = random_instance(rng)
        curve = froc(preds, gts, iou_th=0.5, n_images=8)
        by_conf = sorted(curve.points, key=lambda p: -p.conf_th)
        for before, after in zip(by_conf, by_conf[1:]):
            assert after.tpr >= before.tpr
            assert after.fppi >= before.fppi
        for point in curve.points:
            report = match_and_count(preds, gts, EvalThresholds(conf_th=point.conf_th, iou_th=0.5), 8)
            assert (point.tpr, point.fppi) == (report.tpr, report.fppi)


def test_greedy_equals_optimal_on_small_images():
    rng = np.random.default_rng(6)
    th = EvalThresholds(conf_th=0.0, iou_th=0.5)
    for _ in range(100):
        preds, gts = random_instance(rng, n_images=1)
        preds = preds[:6]
        greedy = match_and_count(preds, gts, th, 1, "greedy")
        optimal = match_and_count(preds, gts, th, 1, "optimal")
        assert greedy.tp == optimal.tp == brute_force_tp(preds, gts, 0.5)


def test_froc_summaries_and_files(tmp_path):
    preds, gts = table_fixture()
    curve = froc(preds, gts, iou_th=0.5, n_images=107)
    # the 0.9 threshold finds 93 masses without a single false alarm
    assert curve.sensitivity_at(0.0) == pytest.approx(0.93)
    assert curve.sensitivity_at(0.5) == pytest.approx(1.0)
    assert 0.0 <= curve.mean_sensitivity() <= 1.0
    with pytest.raises(ParameterError):
        froc(preds, gts, iou_th=0.5, n_images=107, conf_grid=[])

    csv = write_froc_csv(tmp_path / "froc.csv", curve)
    assert csv.read_text().splitlines()[0] == "conf_th,fppi,tpr"
    first = plot_froc(tmp_path / "a.svg", curve).read_bytes()
    second = plot_froc(tmp_path / "b.svg", curve).read_bytes()
    assert first == second


def _write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records))
    return path


def test_jsonl_loading(tmp_path):
    preds, gts = table_fixture()
    pred_path = _write_jsonl(tmp_path / "preds.jsonl", [prediction_record(p) for p in preds])
    gt_path = _write_jsonl(tmp_path / "gts.jsonl", [ground_truth_record(g) for g in gts])
    assert load_predictions(pred_path) == preds
    assert load_ground_truth(gt_path) == gts


def test_parse_errors_name_file_and_row(tmp_path):
    path = tmp_path / "preds.jsonl"
    path.write_text(
        '{"image_id": "a", "x_min": 0, "y_min": 0, "x_max": 5, "y_max": 5, "conf": 0.5}\n'
        '{"image_id": "a", "x_min": 0, "y_min": 0, "x_max": 5}\n'
    )
    with pytest.raises(ParseError, match=r"preds.jsonl:2:"):
        load_predictions(path)

    path.write_text('{"image_id": "a", "x_min": 5, "y_min": 0, "x_max": 5, "y_max": 5, "conf": 0.5}\n')
    with pytest.raises(ParseError, match=r":1:"):
        load_predictions(path)

    path.write_text("not json\n")
    with pytest.raises(ParseError, match=r":1:"):
        load_ground_truth(path)


def test_masses_only_selection():
    gts = [GroundTruth("a", BBox(0, 0, 10, 10))]
    preds = [Prediction("a", BBox(0, 0, 10, 10), 0.9), Prediction("normal", BBox(0, 0, 10, 10), 0.9)]
    everything = EvaluationPipeline().run(preds, gts, n_images=4)
    masses = EvaluationPipeline(masses_only=True).run(preds, gts)
    assert (everything.fp, everything.n_images) == (1, 4)
    assert (masses.fp, masses.n_images) == (0, 1)
