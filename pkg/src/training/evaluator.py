"""Evaluation of a checkpoint on a feature manifest."""

from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import DTypeLike

from src.core.models import Mode, Split
from src.model import ModelParams, MoodNet, build_network
from src.repositories import Checkpoint
from src.training.dataset import DatasetManifest, Example, load_examples
from src.training.metrics import EvalReport
from src.utils import get_logger

logger = get_logger(__name__)


def predict(net: MoodNet, params: ModelParams, examples: Sequence[Example]) -> List[int]:
    """Argmax class per example; ties go to the lowest class index."""
    return [
        net.forward(params, audio=ex.audio, lyrics=ex.lyrics, mode=Mode.EVAL).probs.argmax()
        for ex in examples
    ]


def evaluate_examples(net: MoodNet, params: ModelParams, examples: Sequence[Example]) -> EvalReport:
    predictions = predict(net, params, examples)
    return EvalReport.from_predictions([ex.label for ex in examples], predictions, net.config.n_classes)


def evaluate(
    checkpoint: Checkpoint,
    manifest: DatasetManifest,
    split: Optional[Split] = None,
    dtype: DTypeLike = np.float64,
) -> EvalReport:
    """Confusion matrix and F1 scores of the checkpoint over a manifest (or one split of it)."""
    subset = manifest.subset(split)
    examples = load_examples(subset, checkpoint.config, dtype=dtype)
    net = build_network(checkpoint.config)
    report = evaluate_examples(net, checkpoint.params.astype(dtype), examples)
    logger.info(
        "evaluation_finished",
        split=split.value if split else "all",
        n_samples=report.n_samples,
        macro_f1=round(report.macro_f1, 6),
    )
    return report
