import json

from pydantic import BaseModel, ConfigDict, ValidationError

from ..core.types import BBox
from ..utils.errors import ParameterError, ParseError
from .matching import GroundTruth, Prediction


class GroundTruthRow(BaseModel):
    model_config = ConfigDict(extra="ignore")

    image_id: str
    x_min: int
    y_min: int
    x_max: int
    y_max: int


class PredictionRow(GroundTruthRow):
    conf: float


def _read_rows(path, row_model):
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                row = row_model.model_validate(raw)
                box = BBox(row.x_min, row.y_min, row.x_max, row.y_max)
            except json.JSONDecodeError as e:
                raise ParseError(path, number, f"invalid JSON ({e.msg})") from e
            except ValidationError as e:
                fields = ", ".join(".".join(str(p) for p in err["loc"]) or "row" for err in e.errors())
                raise ParseError(path, number, f"invalid or missing field(s): {fields}") from e
            except ParameterError as e:
                raise ParseError(path, number, str(e)) from e
            rows.append((number, row, box))
    return rows


def load_predictions(path):
    predictions = []
    for number, row, box in _read_rows(path, PredictionRow):
        try:
            predictions.append(Prediction(row.image_id, box, row.conf))
        except ParameterError as e:
            raise ParseError(path, number, str(e)) from e
    return predictions


def load_ground_truth(path):
    return [GroundTruth(row.image_id, box) for _, row, box in _read_rows(path, GroundTruthRow)]


def prediction_record(pred):
    return {"image_id": pred.image_id, **pred.box.to_dict(), "conf": pred.conf}


def ground_truth_record(gt):
    return {"image_id": gt.image_id, **gt.box.to_dict()}
