from .mock_trainer import MockTrainer
from .pipeline import SchedulerPipeline
from .schedule import SchedulerConfig, TrainerInterface, apply_swap, initial_split, run_schedule, select_swap
from .state import (
    EpochEvent,
    MergeEvent,
    Partition,
    PhaseChange,
    SampleRecord,
    ScheduleLog,
    SplitState,
    SwapEvent,
    Termination,
)

__all__ = [
    "EpochEvent",
    "MergeEvent",
    "MockTrainer",
    "Partition",
    "PhaseChange",
    "SampleRecord",
    "ScheduleLog",
    "SchedulerConfig",
    "SchedulerPipeline",
    "SplitState",
    "SwapEvent",
    "Termination",
    "TrainerInterface",
    "apply_swap",
    "initial_split",
    "run_schedule",
    "select_swap",
]
