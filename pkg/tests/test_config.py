import json

import pytest
from pydantic import ValidationError

from pipeline.utils.config import DEFAULT_OUT_DIR, PipelineConfig, load_config


def test_defaults():
    config = load_config(environ={})
    assert config == PipelineConfig()
    assert config.out_dir == DEFAULT_OUT_DIR
    assert config.truncation.low_fraction == 0.05
    assert config.evaluation.conf_th == 0.5


def test_precedence(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 5, "jobs": 3, "clahe": {"tiles_x": 4}}))
    environ = {"MAMMO_SEED": "2", "MAMMO_JOBS": "2", "MAMMO_OUT": "env_out"}

    config = load_config(None, None, environ)
    assert (config.seed, config.jobs, config.out_dir) == (2, 2, "env_out")

    config = load_config(path, None, environ)
    assert (config.seed, config.jobs, config.out_dir) == (5, 3, "env_out")
    assert (config.clahe.tiles_x, config.clahe.tiles_y) == (4, 8)

    config = load_config(path, {"seed": 9, "jobs": None, "clahe": {"tiles_y": 2}}, environ)
    assert (config.seed, config.jobs) == (9, 3)
    assert (config.clahe.tiles_x, config.clahe.tiles_y) == (4, 2)
    assert config.scheduler.seed == 9


def test_invalid_values(tmp_path):
    with pytest.raises(ValidationError):
        load_config(None, {"evaluation": {"conf_th": 1.5}}, {})
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"unknown": 1}))
    with pytest.raises(ValidationError):
        load_config(path, None, {})
