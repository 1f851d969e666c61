from pathlib import Path

from datasets.fingerprint import Hasher
from loguru import logger

from ..utils.utils import dump_json, write_json
from .froc import STANDARD_FPPI, froc, plot_froc, write_froc_csv
from .io import load_ground_truth, load_predictions
from .matching import EvalThresholds, match_and_count


class EvaluationPipeline:
    """Scores detections against ground truth over a fixed image set."""

    CONFIG_HASH = Hasher.hash(["table-decision", "one-to-one", "conf-descending"])

    def __init__(self, thresholds=None, strategy="greedy", masses_only=False):
        self.thresholds = thresholds or EvalThresholds()
        self.strategy = strategy
        self.masses_only = masses_only

    def select(self, preds, gts, n_images=None):
        """Apply the image-set policy; returns the predictions, ground truth and image count to score."""
        gt_images = {g.image_id for g in gts}
        if self.masses_only:
            preds = [p for p in preds if p.image_id in gt_images]
            return preds, gts, n_images if n_images is not None else len(gt_images)
        if n_images is None:
            n_images = len(gt_images | {p.image_id for p in preds})
        return preds, gts, n_images

    def run(self, preds, gts, n_images=None):
        preds, gts, n_images = self.select(preds, gts, n_images)
        return match_and_count(preds, gts, self.thresholds, n_images, self.strategy)

    def curve(self, preds, gts, n_images=None, conf_grid=None):
        preds, gts, n_images = self.select(preds, gts, n_images)
        return froc(preds, gts, self.thresholds.iou_th, n_images, conf_grid, self.strategy)


def _pipeline(args, config):
    return EvaluationPipeline(config.evaluation, args.strategy, args.masses_only)


def evaluate_command(args, config):
    preds, gts = load_predictions(args.predictions), load_ground_truth(args.ground_truth)
    logger.info(f"Loaded {len(preds)} predictions and {len(gts)} ground-truth boxes.")
    report = _pipeline(args, config).run(preds, gts, args.n_images)
    payload = {**report.to_dict(), "thresholds": config.evaluation.model_dump(), "strategy": args.strategy}
    write_json(Path(config.out_dir) / "evaluation_report.json", payload)
    print(dump_json(payload), end="")
    return 0


def froc_command(args, config):
    preds, gts = load_predictions(args.predictions), load_ground_truth(args.ground_truth)
    curve = _pipeline(args, config).curve(preds, gts, args.n_images, args.conf_grid)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_froc_csv(out_dir / "froc.csv", curve)
    plot_froc(out_dir / "froc.svg", curve)
    summary = {
        "points": len(curve.points),
        "sensitivity": {str(f): curve.sensitivity_at(f) for f in STANDARD_FPPI},
        "mean_sensitivity": curve.mean_sensitivity(),
    }
    logger.success(f"FROC with {len(curve.points)} points written to {out_dir}.")
    print(dump_json(summary), end="")
    return 0
