import os
import sys
from argparse import ArgumentParser, ArgumentTypeError

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from loguru import logger

from pipeline import run_session


def unit_interval(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def threshold_list(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ArgumentTypeError(f"expected comma-separated numbers such as 0.9,0.5,0.1, got {text!r}")
    for value in values:
        if not 0.0 <= value <= 1.0:
            raise ArgumentTypeError(f"{value} is not in [0, 1]")
    return values


def tile_grid(text):
    try:
        x, y = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ArgumentTypeError(f"expected COLSxROWS such as 8x8, got {text!r}")
    return x, y


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument("-s", "--seed", type=int, default=None, help="Global seed every random stream derives from.")
    common.add_argument("-j", "--jobs", type=int, default=None, help="Worker threads for batch commands.")
    common.add_argument("-o", "--out", type=str, default=None, help="Output directory for reports and logs.")
    common.add_argument("-c", "--config", type=str, default=os.getenv("MAMMO_CONFIG"), help="JSON config file.")
    common.add_argument("-v", "--verbose", action="store_true", default=False, help="Log at DEBUG level.")

    parser = ArgumentParser(description="Breast-mass detection data pipeline: preprocessing, augmentation, evaluation.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("segment", parents=[common], help="Crop the breast region out of a mammogram.")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, default=None, help="Gaussian pre-smoothing sigma.")

    p = commands.add_parser("normalize", parents=[common], help="Segment and truncation-normalize a mammogram.")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--low", type=float, default=None, help="Fraction of darkest breast pixels clamped to 0.")
    p.add_argument("--high", type=float, default=None, help="Fraction of brightest breast pixels clamped to 1.")
    p.add_argument("--sigma", type=float, default=None, help="Gaussian pre-smoothing sigma.")

    p = commands.add_parser("enhance", parents=[common], help="Build the three-channel CLAHE image.")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--tiles", type=tile_grid, default=None, help="CLAHE tile grid, e.g. 8x8.")
    p.add_argument("--bins", type=int, default=None, help="CLAHE histogram bins.")
    p.add_argument("--split", action="store_true", default=False, help="Also write one 16-bit PNG per channel.")

    p = commands.add_parser("preprocess", parents=[common], help="Preprocess a whole dataset manifest.")
    p.add_argument("dataset", help="Manifest file or dataset directory.")
    p.add_argument("output")
    p.add_argument("--no-truncation", dest="truncate", action="store_false", default=None)
    p.add_argument("--no-enhancement", dest="enhance", action="store_false", default=None)
    p.add_argument("--low", type=float, default=None)
    p.add_argument("--high", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)

    p = commands.add_parser("augment", parents=[common], help="Expand a dataset with natural and classic augmentation.")
    p.add_argument("dataset", help="Manifest file or dataset directory.")
    p.add_argument("output")
    p.add_argument("--natural-per-image", type=int, default=None)
    p.add_argument("--non-mass-regions", type=int, default=None)
    p.add_argument("--classic-per-image", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None, help="Displacement scale in pixels.")
    p.add_argument("--sigma", dest="elastic_sigma", type=float, default=None, help="Displacement smoothing sigma.")
    p.add_argument("--inpaint-radius", type=int, default=None)

    for name, help_text in (("evaluate", "Count TP/FP/FN/TN and report TPR and FPPI."), ("froc", "Sweep confidence thresholds into a FROC curve.")):
        p = commands.add_parser(name, parents=[common], help=help_text)
        p.add_argument("predictions")
        p.add_argument("ground_truth")
        p.add_argument("--iou-th", type=unit_interval, default=None)
        p.add_argument("--n-images", type=int, default=None, help="Images evaluated, including ones without boxes.")
        p.add_argument("--masses-only", action="store_true", default=False)
        p.add_argument("--strategy", choices=("greedy", "optimal"), default="greedy")
        if name == "evaluate":
            p.add_argument("--conf-th", type=unit_interval, default=None)
        else:
            p.add_argument("--conf-grid", type=threshold_list, default=None, help="Comma-separated confidence thresholds.")

    p = commands.add_parser("schedule-sim", parents=[common], help="Replay the dynamic-update schedule on a mock trainer.")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--swap", type=int, default=None)
    p.add_argument("--ratio", type=float, default=None)
    p.add_argument("--mock-profile", type=str, default=None, help="JSON map sample_id -> per-epoch losses.")
    p.add_argument("--hard-threshold", type=float, default=0.5)
    p.add_argument("--initial-lr", type=float, default=None)
    p.add_argument("--final-epochs", type=int, default=None)
    p.add_argument("--max-epochs", type=int, default=None)
    p.add_argument("--plateau-patience", type=int, default=None)

    p = commands.add_parser("split-folds", parents=[common], help="Split a manifest into cross-validation folds.")
    p.add_argument("manifest")
    p.add_argument("--folds", type=int, default=2)
    p.add_argument("--masses-only", action="store_true", default=False)

    p = commands.add_parser("convert-manifest", parents=[common], help="Build a manifest from a public dataset layout.")
    p.add_argument("source", help="INbreast directory or CBIS-DDSM description CSV.")
    p.add_argument("--format", choices=("inbreast", "ddsm"), required=True)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "tiles", None):
        args.tiles_x, args.tiles_y = args.tiles

    logger.remove()
    level = "DEBUG" if args.verbose else os.getenv("MAMMO_LOG_LEVEL", "INFO")
    logger.add(sys.stderr, level=level)
    return run_session(args)


if __name__ == "__main__":
    sys.exit(main())
