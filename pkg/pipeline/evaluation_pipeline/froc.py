from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

from ..utils.errors import ParameterError
from .matching import EvalThresholds, match_and_count

STANDARD_FPPI = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


@dataclass(frozen=True)
class FrocPoint:
    conf_th: float
    fppi: float
    tpr: float


@dataclass(frozen=True)
class FrocCurve:
    points: tuple

    def sensitivity_at(self, max_fppi):
        """Best TPR reachable without exceeding ``max_fppi`` false positives per image."""
        return max((p.tpr for p in self.points if p.fppi <= max_fppi), default=0.0)

    def mean_sensitivity(self, fppi_points=STANDARD_FPPI):
        return sum(self.sensitivity_at(f) for f in fppi_points) / len(fppi_points)

    def to_frame(self):
        return pd.DataFrame(
            {"conf_th": [p.conf_th for p in self.points], "fppi": [p.fppi for p in self.points], "tpr": [p.tpr for p in self.points]}
        )


def default_conf_grid(preds):
    return sorted({p.conf for p in preds} | {1.0}, reverse=True)


def froc(preds, gts, iou_th, n_images, conf_grid=None, strategy="greedy"):
    grid = default_conf_grid(preds) if conf_grid is None else sorted(set(conf_grid), reverse=True)
    if not grid:
        raise ParameterError("Confidence grid is empty.")
    points = []
    for conf_th in grid:
        report = match_and_count(preds, gts, EvalThresholds(conf_th=conf_th, iou_th=iou_th), n_images, strategy)
        points.append(FrocPoint(conf_th, report.fppi, report.tpr))
    points.sort(key=lambda p: (p.fppi, p.tpr, -p.conf_th))
    return FrocCurve(tuple(points))


def write_froc_csv(path, curve):
    curve.to_frame().to_csv(path, index=False, float_format="%.10g")
    return path


def plot_froc(path, curve, label=None):
    # fixed hash salt and no date so repeated runs write identical SVG bytes
    with plt.rc_context({"svg.hashsalt": "froc", "figure.dpi": 100}):
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot([p.fppi for p in curve.points], [p.tpr for p in curve.points], marker="o", drawstyle="steps-post", label=label)
        ax.set_xlabel("False positives per image")
        ax.set_ylabel("Sensitivity (TPR)")
        ax.set_ylim(0.0, 1.05)
        ax.set_title("FROC")
        ax.grid(True)
        if label:
            ax.legend(loc="lower right")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
