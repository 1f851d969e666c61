from loguru import logger
from pydantic import ValidationError

from .augmentation_pipeline.pipeline import augment_command
from .enhancement_pipeline.pipeline import enhance_command
from .evaluation_pipeline.pipeline import evaluate_command, froc_command
from .manifest.pipeline import convert_manifest_command, split_folds_command
from .normalization_pipeline.pipeline import normalize_command, segment_command
from .preprocess_pipeline.pipeline import preprocess_command
from .scheduler_pipeline.pipeline import schedule_sim_command
from .utils.config import load_config
from .utils.errors import PipelineError

COMMANDS = {
    "segment": segment_command,
    "normalize": normalize_command,
    "enhance": enhance_command,
    "preprocess": preprocess_command,
    "augment": augment_command,
    "evaluate": evaluate_command,
    "froc": froc_command,
    "schedule-sim": schedule_sim_command,
    "split-folds": split_folds_command,
    "convert-manifest": convert_manifest_command,
}

# argparse dest -> dotted PipelineConfig field
OVERRIDES = {
    "seed": "seed",
    "jobs": "jobs",
    "out": "out_dir",
    "sigma": "sigma",
    "low": "truncation.low_fraction",
    "high": "truncation.high_fraction",
    "tiles_x": "clahe.tiles_x",
    "tiles_y": "clahe.tiles_y",
    "bins": "clahe.bins",
    "truncate": "preprocess.truncate",
    "enhance": "preprocess.enhance",
    "natural_per_image": "augment.natural_per_image",
    "non_mass_regions": "augment.non_mass_regions",
    "classic_per_image": "augment.classic_per_image",
    "inpaint_radius": "augment.inpaint_radius",
    "alpha": "elastic.alpha",
    "elastic_sigma": "elastic.sigma",
    "conf_th": "evaluation.conf_th",
    "iou_th": "evaluation.iou_th",
    "swap": "scheduler.swap_count",
    "ratio": "scheduler.initial_split_ratio",
    "initial_lr": "scheduler.initial_lr",
    "final_epochs": "scheduler.final_epochs",
    "max_epochs": "scheduler.max_epochs",
    "plateau_patience": "scheduler.plateau_patience",
}


def cli_overrides(args):
    """Nested override dict from the flags that were actually given."""
    tree = {}
    for dest, dotted in OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        *parents, leaf = dotted.split(".")
        node = tree
        for key in parents:
            node = node.setdefault(key, {})
        node[leaf] = value
    return tree


def run_session(args):
    """Resolve the config, run one command and map failures to exit codes."""
    try:
        config = load_config(args.config, cli_overrides(args))
        logger.debug(f"Running {args.command} with seed={config.seed}, jobs={config.jobs}, out={config.out_dir}")
        return COMMANDS[args.command](args, config)
    except FileNotFoundError as e:
        logger.error(f"{e}")
        return 1
    except (PipelineError, ValidationError) as e:
        message = " ".join(str(e).split())
        logger.error(f"{type(e).__name__}: {message}")
        return 2
