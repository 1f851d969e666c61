from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

from ..utils.errors import StateError


class Partition(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    partition: Partition
    last_loss: Optional[float] = None
    is_hard: bool = False

    def __post_init__(self):
        if self.is_hard and (self.partition is not Partition.VALIDATION or self.last_loss is None):
            raise StateError(f"Sample {self.sample_id} flagged hard outside validation or without a loss.")


@dataclass(frozen=True)
class SplitState:
    """Partition of the sample ids into training and validation sets, with the latest loss of each."""

    records: dict

    def __post_init__(self):
        for sample_id, record in self.records.items():
            if record.sample_id != sample_id:
                raise StateError(f"Record keyed {sample_id} describes {record.sample_id}.")

    @classmethod
    def from_partition(cls, train_ids, val_ids):
        train_ids, val_ids = list(train_ids), list(val_ids)
        if set(train_ids) & set(val_ids):
            raise StateError("A sample cannot sit in both partitions.")
        records = {i: SampleRecord(i, Partition.TRAIN) for i in train_ids}
        records.update({i: SampleRecord(i, Partition.VALIDATION) for i in val_ids})
        return cls(records)

    def ids(self, partition):
        return tuple(sorted(i for i, r in self.records.items() if r.partition is partition))

    @property
    def train(self):
        return self.ids(Partition.TRAIN)

    @property
    def validation(self):
        return self.ids(Partition.VALIDATION)

    def validation_records(self):
        return [self.records[i] for i in self.validation]

    def with_training_losses(self, losses):
        records = dict(self.records)
        for sample_id, loss in losses.items():
            records[sample_id] = SampleRecord(sample_id, Partition.TRAIN, float(loss), False)
        return SplitState(records)

    def with_validation(self, results):
        records = dict(self.records)
        for sample_id, (loss, is_hard) in results.items():
            records[sample_id] = SampleRecord(sample_id, Partition.VALIDATION, float(loss), bool(is_hard))
        return SplitState(records)

    def moved(self, to_train, to_val):
        records = dict(self.records)
        for sample_id in to_train:
            records[sample_id] = SampleRecord(sample_id, Partition.TRAIN, records[sample_id].last_loss)
        for sample_id in to_val:
            records[sample_id] = SampleRecord(sample_id, Partition.VALIDATION, records[sample_id].last_loss)
        return SplitState(records)

    def merged(self):
        return self.moved(self.validation, ())


@dataclass(frozen=True)
class EpochEvent:
    epoch: int
    lr: float
    n_train: int
    n_val: int
    mean_loss: float
    kind: str = field(default="epoch", init=False)


@dataclass(frozen=True)
class SwapEvent:
    epoch: int
    ids_to_train: tuple
    ids_to_val: tuple
    kind: str = field(default="swap", init=False)


@dataclass(frozen=True)
class MergeEvent:
    epoch: int
    ids_to_train: tuple
    kind: str = field(default="merge", init=False)


@dataclass(frozen=True)
class PhaseChange:
    epoch: int
    new_lr: float
    reason: str = "final"
    kind: str = field(default="phase_change", init=False)


@dataclass(frozen=True)
class Termination:
    epoch: int
    reason: str
    kind: str = field(default="termination", init=False)


@dataclass
class ScheduleLog:
    events: list = field(default_factory=list)
    final_state: Optional[SplitState] = None

    def append(self, event):
        self.events.append(event)

    def of(self, kind):
        return [e for e in self.events if isinstance(e, kind)]

    def to_records(self):
        records = []
        for event in self.events:
            record = asdict(event)
            for key, value in record.items():
                if isinstance(value, tuple):
                    record[key] = list(value)
            records.append(record)
        return records
