"""Mini-batch ADAM training on categorical cross-entropy.

Reproducibility: the shuffle order of epoch e comes from SeedSequence([seed, e])
and the dropout stream of item i in epoch e from SeedSequence([seed, e, i]),
so a run is a pure function of (config, manifest, seed). Per-sample gradients
are summed in batch order before averaging.
"""

import csv
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config.sections import TrainingSection
from src.core.models import Mode, Split
from src.exception import TrainingError
from src.model import ModelConfig, ModelParams, MoodNet, build_network
from src.optim import AdamHyperParams, AdamState, adam_step, cross_entropy
from src.repositories import Checkpoint, CheckpointRepository
from src.tensor import Tensor
from src.training.dataset import DatasetManifest, Example, load_examples
from src.training.evaluator import evaluate_examples
from src.utils import get_logger

logger = get_logger(__name__)

EPOCH_LOG = "epochs.csv"
EPOCH_LOG_FIELDS = ("epoch", "loss", "val_macro_f1")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float
    val_macro_f1: Optional[float]
    seconds: float

    def row(self) -> Dict[str, str]:
        return {
            "epoch": str(self.epoch),
            "loss": repr(self.loss),
            "val_macro_f1": "" if self.val_macro_f1 is None else repr(self.val_macro_f1),
        }


@dataclass(frozen=True)
class TrainResult:
    checkpoint: Checkpoint
    history: Tuple[EpochRecord, ...]
    run_dir: Optional[Path] = None

    @property
    def params(self) -> ModelParams:
        return self.checkpoint.params


def epoch_order(seed: int, epoch: int, n: int) -> np.ndarray:
    return np.random.default_rng(np.random.SeedSequence([seed, epoch])).permutation(n)


class Trainer:
    """Runs the epoch loop and, given a run directory, writes checkpoints and the epoch log."""

    def __init__(
        self,
        config: ModelConfig,
        hyper: AdamHyperParams = AdamHyperParams(),
        training: TrainingSection = TrainingSection(),
        run_dir: Optional[Path] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ):
        self.config = config
        self.hyper = hyper
        self.training = training
        self.net: MoodNet = build_network(config)
        self.dtype = np.dtype(training.precision.dtype)
        self.run_dir = Path(run_dir) if run_dir is not None else None
        self.repository = CheckpointRepository(self.run_dir) if self.run_dir is not None else None
        self.metadata = dict(metadata or {})

    # ------------------------------------------------------------------
    # Steps
    # ------------------------------------------------------------------

    def batch_gradients(
        self,
        params: ModelParams,
        examples: Sequence[Example],
        indices: Sequence[int],
        epoch: int,
        batch: int,
    ) -> Tuple[Dict[str, np.ndarray], float]:
        """Mean gradient over the batch and the summed loss."""
        total: Dict[str, np.ndarray] = {}
        loss_sum = 0.0
        for i in indices:
            ex = examples[i]
            result = self.net.forward(
                params,
                audio=ex.audio,
                lyrics=ex.lyrics,
                mode=Mode.TRAIN,
                seed=(self.config.seed, epoch, int(i)),
            )
            loss = cross_entropy(result.probs, ex.label)
            if not math.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss in epoch {epoch}, batch {batch}",
                    epoch=epoch,
                    batch=batch,
                    clip_ids=[examples[j].clip_id for j in indices],
                )
            loss_sum += loss
            grads = self.net.backward(params, result.cache, ex.label)
            for name, g in grads.items():
                if name in total:
                    total[name] += g.array
                else:
                    total[name] = g.numpy()
        scale = 1.0 / len(indices)
        return {name: g * scale for name, g in total.items()}, loss_sum

    def run_epoch(
        self,
        params: ModelParams,
        state: AdamState,
        examples: Sequence[Example],
        epoch: int,
    ) -> Tuple[ModelParams, AdamState, float]:
        order = epoch_order(self.config.seed, epoch, len(examples))
        batch_size = self.training.batch_size
        loss_sum = 0.0
        for batch, start in enumerate(range(0, len(order), batch_size)):
            indices = order[start:start + batch_size]
            grads, batch_loss = self.batch_gradients(params, examples, indices, epoch, batch)
            loss_sum += batch_loss
            try:
                new_params, state = adam_step(
                    params,
                    {name: Tensor.from_array(g) for name, g in grads.items()},
                    state,
                )
            except TrainingError as exc:
                exc.details.update(epoch=epoch, batch=batch, clip_ids=[examples[j].clip_id for j in indices])
                raise
            params = ModelParams(new_params)
        return params, state, loss_sum / len(examples)

    # ------------------------------------------------------------------
    # Loop
    # ------------------------------------------------------------------

    def _checkpoint(self, params: ModelParams, state: AdamState, epochs_completed: int) -> Checkpoint:
        return Checkpoint(
            config=self.config,
            params=params,
            adam_state=state,
            epochs_completed=epochs_completed,
            metadata=self.metadata,
        )

    def _append_log(self, record: EpochRecord) -> None:
        path = self.run_dir / EPOCH_LOG
        with path.open("a", encoding="utf-8", newline="") as handle:
            csv.DictWriter(handle, fieldnames=EPOCH_LOG_FIELDS).writerow(record.row())

    def _start_log(self) -> None:
        self.run_dir.mkdir(parents=True, exist_ok=True)
        with (self.run_dir / EPOCH_LOG).open("w", encoding="utf-8", newline="") as handle:
            csv.DictWriter(handle, fieldnames=EPOCH_LOG_FIELDS).writeheader()

    def fit(
        self,
        train_examples: Sequence[Example],
        val_examples: Sequence[Example] = (),
        params: Optional[ModelParams] = None,
    ) -> TrainResult:
        if not train_examples:
            raise TrainingError("no training examples")
        params = params.astype(self.dtype) if params is not None else self.net.init_params(self.dtype)
        state = AdamState.fresh(params, self.hyper)

        init = self._checkpoint(params, state, 0)
        if self.repository is not None:
            self._start_log()
            self.repository.save(init, CheckpointRepository.INIT)
            if self.training.epochs == 0:
                self.repository.save(init, CheckpointRepository.LATEST)

        logger.info(
            "training_started",
            n_train=len(train_examples),
            n_val=len(val_examples),
            epochs=self.training.epochs,
            batch_size=self.training.batch_size,
            parameters=params.count(),
            precision=self.training.precision.value,
        )

        history: List[EpochRecord] = []
        checkpoint = init
        for epoch in range(self.training.epochs):
            started = time.perf_counter()
            params, state, loss = self.run_epoch(params, state, train_examples, epoch)
            val_f1 = evaluate_examples(self.net, params, val_examples).macro_f1 if val_examples else None
            record = EpochRecord(epoch=epoch, loss=loss, val_macro_f1=val_f1, seconds=time.perf_counter() - started)
            history.append(record)
            logger.info(
                "epoch_finished",
                epoch=epoch,
                loss=round(loss, 6),
                val_macro_f1=None if val_f1 is None else round(val_f1, 6),
                seconds=round(record.seconds, 3),
            )

            checkpoint = self._checkpoint(params, state, epoch + 1)
            if self.repository is not None:
                self.repository.save_epoch(checkpoint, epoch)
                self._append_log(record)

        return TrainResult(checkpoint=checkpoint, history=tuple(history), run_dir=self.run_dir)


def train(
    config: ModelConfig,
    manifest: DatasetManifest,
    hyper: AdamHyperParams = AdamHyperParams(),
    training: TrainingSection = TrainingSection(),
    run_dir: Optional[Path] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> TrainResult:
    """Train on the manifest's train split, scoring the val split (if any) after every epoch."""
    trainer = Trainer(config, hyper=hyper, training=training, run_dir=run_dir, metadata=metadata)
    train_examples = load_examples(manifest.subset(Split.TRAIN), config, dtype=trainer.dtype)
    val_examples = load_examples(manifest.subset(Split.VAL), config, dtype=trainer.dtype)
    return trainer.fit(train_examples, val_examples)
