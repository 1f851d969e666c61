from pathlib import Path

from loguru import logger

from ..utils.utils import dump_json, read_json, write_jsonl
from .mock_trainer import MockTrainer
from .schedule import run_schedule
from .state import MergeEvent, SwapEvent, Termination


class SchedulerPipeline:
    def __init__(self, cfg, trainer):
        self.cfg = cfg
        self.trainer = trainer

    def run(self, sample_ids):
        return run_schedule(sample_ids, self.trainer, self.cfg)


def simulated_sample_ids(n):
    return [f"sample_{k:04d}" for k in range(n)]


def schedule_sim_command(args, config):
    profile = read_json(args.mock_profile) if args.mock_profile else {}
    sample_ids = sorted(set(simulated_sample_ids(args.samples or 0)) | set(profile))
    trainer = MockTrainer(profile, hard_threshold=args.hard_threshold)
    log = SchedulerPipeline(config.scheduler, trainer).run(sample_ids)

    out = write_jsonl(Path(config.out_dir) / "schedule_log.jsonl", log.to_records())
    termination = log.of(Termination)[0]
    summary = {
        "samples": len(sample_ids),
        "swaps": len(log.of(SwapEvent)),
        "merged": len(log.of(MergeEvent)[0].ids_to_train),
        "termination": {"epoch": termination.epoch, "reason": termination.reason},
        "log": str(out),
    }
    logger.success(f"Schedule converged={termination.reason == 'converged'} after {termination.epoch} epochs.")
    print(dump_json(summary), end="")
    return 0
