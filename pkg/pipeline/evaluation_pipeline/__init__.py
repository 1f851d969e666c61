from .froc import STANDARD_FPPI, FrocCurve, FrocPoint, froc, plot_froc, write_froc_csv
from .io import load_ground_truth, load_predictions
from .matching import EvalReport, EvalThresholds, GroundTruth, Prediction, match_and_count
from .pipeline import EvaluationPipeline

__all__ = [
    "STANDARD_FPPI",
    "EvalReport",
    "EvalThresholds",
    "EvaluationPipeline",
    "FrocCurve",
    "FrocPoint",
    "GroundTruth",
    "Prediction",
    "froc",
    "load_ground_truth",
    "load_predictions",
    "match_and_count",
    "plot_froc",
    "write_froc_csv",
]
