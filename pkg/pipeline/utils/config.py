"""
Session configuration.

Values resolve in four layers, each overriding the previous one: built-in
defaults, ``MAMMO_*`` environment variables (``.env`` included), a JSON
config file given with ``--config`` and finally explicit command-line flags.
"""

import os

from pydantic import BaseModel, ConfigDict, Field

from ..augmentation_pipeline.classic import ClassicAugmentRanges
from ..augmentation_pipeline.elastic import ElasticParams
from ..augmentation_pipeline.pipeline import AugmentBatchConfig
from ..enhancement_pipeline.clahe import ClaheConfig
from ..evaluation_pipeline.matching import EvalThresholds
from ..normalization_pipeline.segment_breast import DEFAULT_SIGMA
from ..normalization_pipeline.truncation import TruncationParams
from ..preprocess_pipeline.pipeline import PreprocessConfig
from ..scheduler_pipeline.schedule import SchedulerConfig
from .utils import read_json

DEFAULT_OUT_DIR = "session_output"

ENVIRONMENT = {
    "MAMMO_SEED": ("seed", int),
    "MAMMO_JOBS": ("jobs", int),
    "MAMMO_OUT": ("out_dir", str),
}


class PipelineConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=0, ge=0)
    jobs: int = Field(default=1, ge=1)
    out_dir: str = DEFAULT_OUT_DIR
    sigma: float = Field(default=DEFAULT_SIGMA, gt=0.0)
    truncation: TruncationParams = Field(default_factory=TruncationParams)
    clahe: ClaheConfig = Field(default_factory=ClaheConfig)
    preprocess: PreprocessConfig = Field(default_factory=PreprocessConfig)
    elastic: ElasticParams = Field(default_factory=ElasticParams)
    classic: ClassicAugmentRanges = Field(default_factory=ClassicAugmentRanges)
    augment: AugmentBatchConfig = Field(default_factory=AugmentBatchConfig)
    evaluation: EvalThresholds = Field(default_factory=EvalThresholds)
    scheduler: SchedulerConfig = Field(default_factory=SchedulerConfig)


def deep_merge(base, update):
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def environment_overrides(environ=None):
    environ = os.environ if environ is None else environ
    return {field: cast(environ[name]) for name, (field, cast) in ENVIRONMENT.items() if environ.get(name)}


def load_config(config_path=None, overrides=None, environ=None):
    """
    Resolve the session config.

    ``overrides`` is a nested dict of explicit CLI values; ``None`` leaves are
    ignored so unset flags never mask the file or the environment.
    """
    data = PipelineConfig().model_dump()
    data = deep_merge(data, environment_overrides(environ))
    if config_path:
        data = deep_merge(data, read_json(config_path))
    data = deep_merge(data, _drop_none(overrides or {}))
    config = PipelineConfig.model_validate(data)
    # the scheduler draws from the session seed
    if config.scheduler.seed != config.seed:
        config = config.model_copy(update={"scheduler": config.scheduler.model_copy(update={"seed": config.seed})})
    return config


def _drop_none(tree):
    cleaned = {}
    for key, value in tree.items():
        if isinstance(value, dict):
            value = _drop_none(value)
            if value:
                cleaned[key] = value
        elif value is not None:
            cleaned[key] = value
    return cleaned
