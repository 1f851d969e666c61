from .schedule import TrainerInterface

DEFAULT_HARD_THRESHOLD = 0.5


class MockTrainer(TrainerInterface):
    """
    Replays per-epoch losses from a profile ``{sample_id: [loss_epoch1, loss_epoch2, ...]}``.

    A sample's loss at epoch e is the e-th entry of its sequence, holding the
    last entry once the sequence runs out. Samples missing from the profile
    always report ``default_loss``. A validation sample is hard when its loss
    exceeds ``hard_threshold``.
    """

    def __init__(self, profile=None, hard_threshold=DEFAULT_HARD_THRESHOLD, default_loss=0.0):
        self.profile = {k: [float(v) for v in seq] for k, seq in (profile or {}).items()}
        self.hard_threshold = hard_threshold
        self.default_loss = default_loss
        self.epoch = 0
        self.learning_rates = []

    def loss(self, sample_id, epoch=None):
        epoch = self.epoch if epoch is None else epoch
        sequence = self.profile.get(sample_id)
        if not sequence:
            return self.default_loss
        return sequence[min(max(epoch, 1) - 1, len(sequence) - 1)]

    def train_epoch(self, train_ids, learning_rate):
        self.epoch += 1
        self.learning_rates.append(learning_rate)
        return {i: self.loss(i) for i in train_ids}

    def validate(self, val_ids):
        return {i: (self.loss(i), self.loss(i) > self.hard_threshold) for i in val_ids}
