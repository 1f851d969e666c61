import math
from abc import ABC, abstractmethod
from fractions import Fraction

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..utils.errors import ContractError, ParameterError, StateError
from ..utils.utils import make_rng
from .state import (
    EpochEvent,
    MergeEvent,
    PhaseChange,
    ScheduleLog,
    SplitState,
    SwapEvent,
    Termination,
)

SPLIT_STREAM = 11
SWAP_STREAM = 12


class SchedulerConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    swap_count: int = Field(default=3, ge=1)
    initial_split_ratio: float = Field(default=0.8, gt=0.0, lt=1.0)
    initial_lr: float = Field(default=0.01, gt=0.0)
    final_lr_fraction: float = Field(default=0.1, gt=0.0, le=1.0)
    final_epochs: int = Field(default=10, ge=0)
    max_epochs: int = Field(default=500, ge=1)
    plateau_patience: int = Field(default=0, ge=0)
    plateau_factor: float = Field(default=0.1, gt=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)


class TrainerInterface(ABC):
    """What the scheduler needs from a detector trainer."""

    @abstractmethod
    def train_epoch(self, train_ids, learning_rate):
        """Train one epoch on ``train_ids``; returns ``{sample_id: loss}``."""

    @abstractmethod
    def validate(self, val_ids):
        """Score ``val_ids``; returns ``{sample_id: (loss, is_hard)}``."""


def initial_split(sample_ids, cfg):
    ids = sorted(sample_ids)
    if len(ids) < 2:
        raise ParameterError(f"Need at least 2 samples to split, got {len(ids)}.")
    if len(set(ids)) != len(ids):
        raise ParameterError("Sample ids must be unique.")
    n_train = math.floor(Fraction(repr(cfg.initial_split_ratio)) * len(ids))
    n_train = min(max(n_train, 1), len(ids) - 1)
    order = make_rng(cfg.seed, SPLIT_STREAM).permutation(len(ids))
    shuffled = [ids[k] for k in order]
    return SplitState.from_partition(shuffled[:n_train], shuffled[n_train:])


def select_swap(val_records, swap_count):
    """Hard validation samples with the highest losses, ties by id; at most ``swap_count``."""
    hard = [r for r in val_records if r.is_hard]
    hard.sort(key=lambda r: (-r.last_loss, r.sample_id))
    return [r.sample_id for r in hard[:swap_count]]


def apply_swap(state, to_train, cfg, epoch=0):
    """
    Promote ``to_train`` and send as many randomly chosen training samples back.

    The counter-swap is drawn from the training set as it was before the
    promotion, so no sample moves twice in one event.
    """
    to_train = list(to_train)
    validation = set(state.validation)
    if len(set(to_train)) != len(to_train):
        raise StateError(f"Duplicate ids in swap: {to_train}.")
    if not set(to_train) <= validation:
        raise StateError(f"Ids {sorted(set(to_train) - validation)} are not in the validation set.")
    train = list(state.train)
    if len(train) < len(to_train):
        raise StateError(f"Cannot counter-swap {len(to_train)} samples from a training set of {len(train)}.")

    rng = make_rng(cfg.seed, SWAP_STREAM, epoch)
    picked = rng.choice(len(train), size=len(to_train), replace=False)
    to_val = sorted(train[k] for k in picked)
    event = SwapEvent(epoch, tuple(to_train), tuple(to_val))
    return state.moved(to_train, to_val), event


def _check_ids(kind, requested, returned):
    unknown = set(returned) - set(requested)
    if unknown:
        raise ContractError(f"Trainer {kind} returned unknown ids {sorted(unknown)}.")
    missing = set(requested) - set(returned)
    if missing:
        raise ContractError(f"Trainer {kind} returned no loss for {sorted(missing)}.")


def _checked_train(trainer, ids, lr):
    losses = trainer.train_epoch(ids, lr)
    _check_ids("train_epoch", ids, losses)
    return losses


def _checked_validate(trainer, ids):
    results = trainer.validate(ids)
    _check_ids("validate", ids, results)
    return results


def _mean(values):
    values = list(values)
    return float(np.mean(values)) if values else 0.0


def run_schedule(samples, trainer, cfg):
    """
    Drive the dynamic-update loop until the validation set holds no hard samples.

    Each epoch trains, validates and swaps the hardest validation samples into
    training. Once nothing is hard (or ``max_epochs`` is reached) the
    validation set is merged into training and ``final_epochs`` epochs run at
    ``initial_lr * final_lr_fraction``.
    """
    log = ScheduleLog()
    state = initial_split(samples, cfg)
    lr = cfg.initial_lr
    best_loss, stale = math.inf, 0
    epoch = 0

    while True:
        if epoch >= cfg.max_epochs:
            logger.warning(f"No convergence after {epoch} epochs, stopping the swap phase.")
            log.append(Termination(epoch, "cap"))
            break
        epoch += 1
        losses = _checked_train(trainer, state.train, lr)
        state = state.with_training_losses(losses)
        mean_loss = _mean(losses.values())
        log.append(EpochEvent(epoch, lr, len(state.train), len(state.validation), mean_loss))

        state = state.with_validation(_checked_validate(trainer, state.validation))
        to_train = select_swap(state.validation_records(), cfg.swap_count)
        if not to_train:
            log.append(Termination(epoch, "converged"))
            break
        state, event = apply_swap(state, to_train, cfg, epoch)
        log.append(event)
        logger.debug(f"Epoch {epoch}: swapped {list(event.ids_to_train)} <-> {list(event.ids_to_val)}")

        if cfg.plateau_patience:
            if mean_loss < best_loss:
                best_loss, stale = mean_loss, 0
            else:
                stale += 1
            if stale >= cfg.plateau_patience:
                lr *= cfg.plateau_factor
                stale = 0
                log.append(PhaseChange(epoch, lr, "plateau"))

    merged = state.validation
    state = state.merged()
    log.append(MergeEvent(epoch, merged))
    final_lr = cfg.initial_lr * cfg.final_lr_fraction
    log.append(PhaseChange(epoch, final_lr, "final"))

    for _ in range(cfg.final_epochs):
        epoch += 1
        losses = _checked_train(trainer, state.train, final_lr)
        state = state.with_training_losses(losses)
        log.append(EpochEvent(epoch, final_lr, len(state.train), 0, _mean(losses.values())))

    log.final_state = state
    return log
