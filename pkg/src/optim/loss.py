"""Categorical cross-entropy over softmax outputs."""

import math
from dataclasses import dataclass

import numpy as np

from src.exception import LabelError
from src.nn.ops import softmax
from src.tensor import Tensor

PROB_CLIP = 1e-12


@dataclass(frozen=True)
class LossValue:
    loss: float
    grad: Tensor  # w.r.t. the logits


def _check_label(label: int, k: int) -> int:
    if isinstance(label, bool) or not isinstance(label, (int, np.integer)) or not 0 <= label < k:
        raise LabelError(label, k)
    return int(label)


def cross_entropy(probs: Tensor, label: int) -> float:
    """-log(max(p[label], 1e-12)), in nats."""
    label = _check_label(label, probs.shape[0])
    return -math.log(max(float(probs.array[label]), PROB_CLIP))


def softmax_ce_grad(logits: Tensor, label: int) -> Tensor:
    """softmax(logits) - onehot(label)."""
    label = _check_label(label, logits.shape[0])
    grad = softmax(logits).numpy()
    grad[label] -= 1.0
    return Tensor.from_array(grad)


def softmax_cross_entropy(logits: Tensor, label: int) -> LossValue:
    probs = softmax(logits)
    return LossValue(loss=cross_entropy(probs, label), grad=softmax_ce_grad(logits, label))
