from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import linear_sum_assignment

from ..core.boxes import iou
from ..core.types import BBox
from ..utils.errors import ParameterError

STRATEGIES = ("greedy", "optimal")


@dataclass(frozen=True)
class Prediction:
    image_id: str
    box: BBox
    conf: float

    def __post_init__(self):
        if not 0.0 <= self.conf <= 1.0:
            raise ParameterError(f"Confidence {self.conf} is outside [0, 1].")

    def sort_key(self):
        return (-self.conf, self.image_id, self.box.as_tuple())


@dataclass(frozen=True)
class GroundTruth:
    image_id: str
    box: BBox


class EvalThresholds(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    conf_th: float = Field(default=0.5, ge=0.0, le=1.0)
    iou_th: float = Field(default=0.5, ge=0.0, le=1.0)


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int
    n_images: int

    @property
    def tpr(self):
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def fppi(self):
        return self.fp / self.n_images

    def __add__(self, other):
        return EvalReport(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn, self.n_images)

    def to_dict(self):
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "n_images": self.n_images,
            "tpr": self.tpr,
            "fppi": self.fppi,
        }


def _greedy_tp(kept, gts, iou_th):
    matched = [False] * len(gts)
    tp = 0
    for pred in kept:
        best, best_iou = -1, -1.0
        for k, gt in enumerate(gts):
            if matched[k]:
                continue
            overlap = iou(pred.box, gt.box)
            if overlap > best_iou:
                best, best_iou = k, overlap
        if best >= 0 and best_iou >= iou_th:
            matched[best] = True
            tp += 1
    return tp


def _optimal_tp(kept, gts, iou_th):
    if not kept or not gts:
        return 0
    hits = np.array([[iou(p.box, g.box) >= iou_th for g in gts] for p in kept], dtype=np.int64)
    rows, cols = linear_sum_assignment(hits, maximize=True)
    return int(hits[rows, cols].sum())


def match_image(preds, gts, th, strategy="greedy"):
    """
    Counts for a single image as ``(tp, fp, fn, tn)``.

    Predictions under ``conf_th`` never count as alarms; those overlapping no
    ground truth by ``iou_th`` are the true negatives.
    """
    kept = sorted((p for p in preds if p.conf >= th.conf_th), key=Prediction.sort_key)
    dropped = [p for p in preds if p.conf < th.conf_th]
    gts = sorted(gts, key=lambda g: g.box.as_tuple())

    if strategy == "greedy":
        tp = _greedy_tp(kept, gts, th.iou_th)
    elif strategy == "optimal":
        tp = _optimal_tp(kept, gts, th.iou_th)
    else:
        raise ParameterError(f"Unknown matching strategy '{strategy}', expected one of {STRATEGIES}.")

    tn = sum(1 for p in dropped if max((iou(p.box, g.box) for g in gts), default=0.0) < th.iou_th)
    return tp, len(kept) - tp, len(gts) - tp, tn


def group_by_image(items):
    grouped = defaultdict(list)
    for item in items:
        grouped[item.image_id].append(item)
    return grouped


def match_and_count(preds, gts, th, n_images, strategy="greedy"):
    if n_images < 1:
        raise ParameterError(f"n_images must be at least 1, got {n_images}.")
    by_pred, by_gt = group_by_image(preds), group_by_image(gts)
    image_ids = sorted(set(by_pred) | set(by_gt))
    if len(image_ids) > n_images:
        raise ParameterError(f"{len(image_ids)} distinct images referenced but n_images is {n_images}.")

    report = EvalReport(0, 0, 0, 0, n_images)
    for image_id in image_ids:
        report = report + EvalReport(*match_image(by_pred[image_id], by_gt[image_id], th, strategy), n_images)
    return report
